#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace wopsip {

/// Worker count for parallel_for; 0 selects std::thread::hardware_concurrency().
void set_num_threads(int n);
int num_threads();

/// Calls fn(i) for i in [0, n) over contiguous static chunks. Callers write
/// only to slots indexed by i, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Neumaier-compensated sum in index order.
double ordered_sum(std::span<const double> values);

} // namespace wopsip
