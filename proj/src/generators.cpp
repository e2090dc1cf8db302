#include "multibid/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "multibid/rng.hpp"

namespace multibid {

Instance gen_diagonal_hard(int n) {
    if (n < 1) throw ContractViolation("gen_diagonal_hard requires n >= 1");
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::vector<double> prices(cells, 1.0);
    std::vector<double> values(cells, 0.0);
    for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i) * n + i] = 1.0;
    }
    Factorization fact{std::vector<double>(static_cast<std::size_t>(n), 1.0),
                       std::vector<double>(static_cast<std::size_t>(n), 1.0)};
    return Instance(n, n, std::move(prices), std::move(values), static_cast<double>(n),
                    std::move(fact));
}

Instance gen_antidiagonal_hard(int n, int c) {
    if (n < 1) throw ContractViolation("gen_antidiagonal_hard requires n >= 1");
    if (c < 2) throw ContractViolation("gen_antidiagonal_hard requires integer c >= 2");
    const double above_price = std::pow(n, 1.0 / (1.0 - 2.0 * c));
    const double below_price = std::pow(n, (c - 1.0) / (2.0 * c - 1.0));
    std::vector<double> prices, values;
    prices.reserve(static_cast<std::size_t>(n) * n);
    values.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i + j < n - 1) { // above the antidiagonal
                prices.push_back(above_price);
                values.push_back(0.0);
            } else if (i + j == n - 1) {
                prices.push_back(1.0);
                values.push_back(1.0);
            } else {
                prices.push_back(below_price);
                values.push_back(1.0);
            }
        }
    }
    return Instance(n, n, std::move(prices), std::move(values), static_cast<double>(n));
}

Instance gen_independent_set_instance(const std::vector<std::vector<int>> &adjacency,
                                      std::optional<double> budget) {
    const int n = static_cast<int>(adjacency.size());
    if (n < 1) throw ContractViolation("graph must have at least one vertex");
    constexpr double kEpsPrice = 1e-12;
    std::vector<double> prices(static_cast<std::size_t>(n) * n, kEpsPrice);
    std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        prices[static_cast<std::size_t>(i) * n + i] = 1.0;
        values[static_cast<std::size_t>(i) * n + i] = 1.0;
        for (int j : adjacency[i]) {
            if (j < 0 || j >= n || j == i) {
                throw ContractViolation("bad adjacency list entry");
            }
            prices[static_cast<std::size_t>(i) * n + j] = 1.0;
            prices[static_cast<std::size_t>(j) * n + i] = 1.0;
        }
    }
    return Instance(n, n, std::move(prices), std::move(values),
                    budget.value_or(static_cast<double>(n)));
}

ValueMode value_mode_from_string(const std::string &name) {
    if (name == "monotone") return ValueMode::kMonotone;
    if (name == "ratio-monotone") return ValueMode::kRatioMonotone;
    if (name == "random") return ValueMode::kRandom;
    throw ContractViolation("unknown value mode: " + name);
}

std::string to_string(ValueMode mode) {
    switch (mode) {
    case ValueMode::kMonotone: return "monotone";
    case ValueMode::kRatioMonotone: return "ratio-monotone";
    case ValueMode::kRandom: return "random";
    }
    return "?";
}

Instance gen_multiplicative(const MultiplicativeGenOptions &options) {
    const int m = options.m;
    const int n = options.n;
    if (m < 1 || n < 1) throw ContractViolation("gen_multiplicative requires m, n >= 1");
    if (options.price_noise < 0.0 || options.value_noise < 0.0) {
        throw ContractViolation("noise sigmas must be non-negative");
    }
    std::mt19937_64 rng(options.seed);

    std::vector<double> row_factor(static_cast<std::size_t>(m));
    std::vector<double> col_factor(static_cast<std::size_t>(n));
    for (double &x : row_factor) x = std::exp(uniform_in(rng, -2.0, 2.0));
    for (double &x : col_factor) x = std::exp(uniform_in(rng, -2.0, 2.0));

    std::vector<double> prices(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double p = row_factor[i] * col_factor[j];
            if (options.price_noise > 0.0) {
                p *= std::exp(options.price_noise * normal01(rng));
            }
            prices[static_cast<std::size_t>(i) * n + j] = p;
        }
    }

    std::vector<double> values(static_cast<std::size_t>(m) * n, 0.0);
    switch (options.value_mode) {
    case ValueMode::kMonotone:
        // Positive increments accumulated down each column: strictly
        // increasing along rows under the identity permutation.
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                acc += uniform_in(rng, 0.05, 1.0);
                values[static_cast<std::size_t>(i) * n + j] = acc;
            }
        }
        break;
    case ValueMode::kRatioMonotone: {
        std::vector<double> rho(static_cast<std::size_t>(m));
        for (double &x : rho) x = uniform_in(rng, 0.1, 10.0);
        std::sort(rho.begin(), rho.end());
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                values[static_cast<std::size_t>(i) * n + j] =
                    prices[static_cast<std::size_t>(i) * n + j] * rho[i];
            }
        }
        break;
    }
    case ValueMode::kRandom:
        for (double &v : values) v = uniform01(rng);
        break;
    }
    if (options.value_noise > 0.0) {
        for (double &v : values) v *= std::exp(options.value_noise * normal01(rng));
    }

    double total = 0.0;
    for (double p : prices) total += p;
    const double budget = std::max(options.budget_fraction * total, 1e-12);

    std::optional<Factorization> fact;
    if (options.price_noise == 0.0) {
        fact = Factorization{row_factor, col_factor};
    }
    return Instance(m, n, std::move(prices), std::move(values), budget, std::move(fact));
}

} // namespace multibid
