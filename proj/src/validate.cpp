#include "multibid/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multibid/consensus.hpp"

namespace multibid {
namespace {

bool present(const std::vector<bool> *mask, int i, int j, int n) {
    return mask == nullptr || (*mask)[static_cast<std::size_t>(i) * n + j];
}

} // namespace

MultiplicativeFit fit_multiplicative(const std::vector<double> &prices, int m, int n,
                                     const std::vector<bool> *mask) {
    if (m <= 0 || n <= 0 || prices.size() != static_cast<std::size_t>(m) * n) {
        throw ContractViolation("fit_multiplicative: bad matrix dimensions");
    }
    if (mask && mask->size() != prices.size()) {
        throw ContractViolation("fit_multiplicative: mask size mismatch");
    }
    std::vector<double> logp(prices.size());
    for (std::size_t k = 0; k < prices.size(); ++k) {
        if (present(mask, static_cast<int>(k) / n, static_cast<int>(k) % n, n)) {
            if (!(prices[k] > 0.0)) {
                throw ContractViolation("fit_multiplicative: prices must be positive");
            }
            logp[k] = std::log(prices[k]);
        }
    }

    std::vector<int> row_count(static_cast<std::size_t>(m), 0);
    std::vector<int> col_count(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (present(mask, i, j, n)) {
                ++row_count[i];
                ++col_count[j];
            }
        }
    }
    if (std::find(row_count.begin(), row_count.end(), 0) != row_count.end() ||
        std::find(col_count.begin(), col_count.end(), 0) != col_count.end()) {
        throw DegenerateFit("fit_multiplicative: a row or column has no present cell");
    }

    std::vector<double> a(static_cast<std::size_t>(m), 0.0);
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    int sweeps = 0;

    const bool complete = mask == nullptr ||
                          std::find(mask->begin(), mask->end(), false) == mask->end();
    if (complete) {
        // Balanced two-way layout: a_i = row mean - grand mean, b_j = column
        // mean; the gauge sum a_i = 0 falls out.
        double grand = 0.0;
        for (double x : logp) grand += x;
        grand /= static_cast<double>(logp.size());
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += logp[static_cast<std::size_t>(i) * n + j];
            a[i] = s / n - grand;
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += logp[static_cast<std::size_t>(i) * n + j];
            b[j] = s / m;
        }
    } else {
        constexpr int kMaxSweeps = 500;
        constexpr double kTol = 1e-10;
        for (sweeps = 1; sweeps <= kMaxSweeps; ++sweeps) {
            double delta = 0.0;
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (present(mask, i, j, n)) s += logp[static_cast<std::size_t>(i) * n + j] - b[j];
                }
                const double next = s / row_count[i];
                delta = std::max(delta, std::abs(next - a[i]));
                a[i] = next;
            }
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int i = 0; i < m; ++i) {
                    if (present(mask, i, j, n)) s += logp[static_cast<std::size_t>(i) * n + j] - a[i];
                }
                const double next = s / col_count[j];
                delta = std::max(delta, std::abs(next - b[j]));
                b[j] = next;
            }
            double scale = 0.0;
            for (double x : a) scale = std::max(scale, std::abs(x));
            for (double x : b) scale = std::max(scale, std::abs(x));
            if (delta <= kTol * (1.0 + scale)) break;
        }
        // Re-gauge: move the mean of a into b.
        const double shift = std::accumulate(a.begin(), a.end(), 0.0) / m;
        for (double &x : a) x -= shift;
        for (double &x : b) x += shift;
    }

    double mean = 0.0;
    int count = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (present(mask, i, j, n)) {
                mean += logp[static_cast<std::size_t>(i) * n + j];
                ++count;
            }
        }
    }
    mean /= count;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!present(mask, i, j, n)) continue;
            const double y = logp[static_cast<std::size_t>(i) * n + j];
            ss_res += (y - a[i] - b[j]) * (y - a[i] - b[j]);
            ss_tot += (y - mean) * (y - mean);
        }
    }

    MultiplicativeFit fit;
    fit.sweeps = sweeps;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.rows.resize(a.size());
    fit.cols.resize(b.size());
    std::transform(a.begin(), a.end(), fit.rows.begin(), [](double x) { return std::exp(x); });
    std::transform(b.begin(), b.end(), fit.cols.begin(), [](double x) { return std::exp(x); });
    return fit;
}

MultiplicativeFit fit_multiplicative(const Instance &instance) {
    return fit_multiplicative(instance.prices(), instance.rows(), instance.cols());
}

double monotonicity_score(const Instance &instance, Axis axis, MonotonicityMode mode,
                          std::uint64_t seed) {
    const int groups = axis == Axis::kRows ? instance.cols() : instance.rows();
    const int universe = axis == Axis::kRows ? instance.rows() : instance.cols();
    std::vector<PartialPermutation> partials;
    partials.reserve(static_cast<std::size_t>(groups));
    for (int g = 0; g < groups; ++g) {
        PartialPermutation p;
        p.column_id = g;
        p.rows.resize(static_cast<std::size_t>(universe));
        std::iota(p.rows.begin(), p.rows.end(), 0);
        auto key = [&](int e) {
            const int i = axis == Axis::kRows ? e : g;
            const int j = axis == Axis::kRows ? g : e;
            const double v = instance.value(i, j);
            return mode == MonotonicityMode::kValue ? v : v / instance.price(i, j);
        };
        std::stable_sort(p.rows.begin(), p.rows.end(),
                         [&](int x, int y) { return key(x) < key(y); });
        partials.push_back(std::move(p));
    }
    const TotalOrder order = consensus_permutation(partials, universe, seed);
    return quality(order, partials);
}

} // namespace multibid
