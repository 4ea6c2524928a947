#pragma once

#include "wopsip/assembly.hpp"
#include "wopsip/study.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace wopsip::cli {

inline constexpr int k_exit_ok = 0;
inline constexpr int k_exit_failure = 2;
inline constexpr int k_exit_rates = 3;
inline constexpr int k_exit_usage = 64;

/// Bad flag values that the parser itself cannot see.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string scheme = "wopsip";
    std::optional<int> dim;
    std::optional<std::string> family;
    int levels = 4;
    int base = 0; // 0: 8 in 2D, 2 in 3D
    int aniso_ratio = 1;
    double gamma = 10.0;
    double grading = 4.0;
    std::string solution = "sinsin";
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 1;
    int threads = 0;
    bool assert_rates = false;
    double min_energy_rate = 0.9;
    double min_l2_rate = 1.8;
};

/// Resolved study parameters; throws UsageError on inconsistent flags.
struct Resolved {
    FamilySpec family;
    PenaltyConfig penalty;
    int dim = 2;
};
Resolved resolve(const RunConfig& config);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

int run_converge(const RunConfig& config, std::ostream& log);
int run_probe(const RunConfig& config, std::ostream& log);
int run_meshinfo(const RunConfig& config, std::ostream& log);

} // namespace wopsip::cli
