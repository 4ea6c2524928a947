#pragma once

#include <Eigen/Core>

#include <functional>

namespace wopsip {

// Points and vectors live in R^2 or R^3; the dimension is a runtime value but
// storage is fixed-capacity so nothing here touches the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

using ScalarFunction = std::function<double(const Vec&)>;
using VectorFunction = std::function<Vec(const Vec&)>;

inline Vec make_vec(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec make_vec(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

} // namespace wopsip
