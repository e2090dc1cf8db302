#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multibid/instance.hpp"

namespace multibid {

/// Unit prices, unit diagonal values, B = n. OPT picks the whole diagonal;
/// multiplicative bidding pays for forced off-diagonal cells.
Instance gen_diagonal_hard(int n);

/// The antidiagonal construction: cheap worthless cells above, unit cells on
/// the antidiagonal, expensive unit-value cells below, B = n. c >= 2 steers
/// the price exponents; c = 2 gives the n^{-1/3} / n^{1/3} instance.
Instance gen_antidiagonal_hard(int n, int c);

/// Identity values over I_n + A(G) prices from an undirected graph given as
/// an adjacency list. Zero prices of the reduction are replaced by
/// eps = 1e-12 so the instance stays valid; those cells are effectively free
/// and worthless. Budget defaults to n when not supplied.
Instance gen_independent_set_instance(const std::vector<std::vector<int>> &adjacency,
                                      std::optional<double> budget = std::nullopt);

enum class ValueMode { kMonotone, kRatioMonotone, kRandom };

ValueMode value_mode_from_string(const std::string &name);
std::string to_string(ValueMode mode);

struct MultiplicativeGenOptions {
    int m = 8;
    int n = 8;
    std::uint64_t seed = 0;
    double price_noise = 0.0; // relative sigma on log prices
    ValueMode value_mode = ValueMode::kMonotone;
    double value_noise = 0.0;
    double budget_fraction = 0.25; // B as a fraction of total price
};

/// Seeded synthetic family: log-uniform row/column price factors, optional
/// lognormal price noise, values per mode. The factorization is attached
/// only when price_noise == 0.
Instance gen_multiplicative(const MultiplicativeGenOptions &options);

} // namespace multibid
