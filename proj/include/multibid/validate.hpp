#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multibid/instance.hpp"

namespace multibid {

struct MultiplicativeFit {
    std::vector<double> rows; // r_i = exp(a_i), gauge: sum of a_i is 0
    std::vector<double> cols; // c_j = exp(b_j)
    double r_squared = 0.0;
    int sweeps = 0; // ALS sweeps used (0 for the closed form)
};

/// Least-squares two-factor fit of log p_ij ~ a_i + b_j.
///
/// Complete matrices use the closed form (row mean minus grand mean, column
/// mean). With a mask, alternating least squares to 1e-10 relative or 500
/// sweeps. R^2 is computed over present cells of log p. Throws DegenerateFit
/// when some row or column has no present cell.
MultiplicativeFit fit_multiplicative(const std::vector<double> &prices, int m, int n,
                                     const std::vector<bool> *mask = nullptr);

MultiplicativeFit fit_multiplicative(const Instance &instance);

enum class Axis { kRows, kCols };
enum class MonotonicityMode { kValue, kRatio };

/// Consensus-permutation quality of per-column (or per-row) orderings of
/// v_ij or v_ij/p_ij. A lower bound on how monotone the instance is.
double monotonicity_score(const Instance &instance, Axis axis, MonotonicityMode mode,
                          std::uint64_t seed);

} // namespace multibid
