#include "multibid/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace multibid {
namespace {

struct RankedCell {
    Cell cell;
    double ratio;
    double value;
    double price;
};

} // namespace

GreedyOptResult individual_optimum(const Instance &instance, double budget) {
    if (!(budget > 0.0)) {
        throw ContractViolation("greedy budget must be positive");
    }
    std::vector<RankedCell> ranked;
    for (int i = 0; i < instance.rows(); ++i) {
        for (int j = 0; j < instance.cols(); ++j) {
            const double v = instance.value(i, j);
            if (v <= 0.0) continue; // zero-value cells only consume budget
            const double p = instance.price(i, j);
            ranked.push_back({{i, j}, v / p, v, p});
        }
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedCell &a, const RankedCell &b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        if (a.value != b.value) return a.value > b.value;
        return a.cell < b.cell;
    });

    GreedyOptResult out;
    out.ratio_cutoff = std::numeric_limits<double>::infinity();
    double remaining = budget;
    for (const RankedCell &rc : ranked) {
        if (rc.price > remaining) {
            out.exhausted = true; // prefix semantics: first misfit ends the run
            break;
        }
        remaining -= rc.price;
        out.cells.cells.push_back(rc.cell);
        out.cells.spend += rc.price;
        out.cells.value += rc.value;
        out.ratio_cutoff = rc.ratio;
    }
    std::sort(out.cells.cells.begin(), out.cells.cells.end());
    return out;
}

std::optional<BidAssignment> is_capturable(const Instance &instance,
                                           const std::vector<Cell> &cells) {
    const int m = instance.rows();
    const int n = instance.cols();
    std::vector<std::vector<bool>> in(static_cast<std::size_t>(m),
                                      std::vector<bool>(static_cast<std::size_t>(n), false));
    for (const Cell &c : cells) {
        if (c.row < 0 || c.row >= m || c.col < 0 || c.col >= n) {
            throw ContractViolation("cell outside instance grid");
        }
        in[c.row][c.col] = true;
    }

    std::vector<bool> row_active(static_cast<std::size_t>(m), false);
    std::vector<bool> col_active(static_cast<std::size_t>(n), false);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (in[i][j]) {
                row_active[i] = true;
                col_active[j] = true;
            }
        }
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const double lp = std::log(instance.price(i, j));
            lo = std::min(lo, lp);
            hi = std::max(hi, lp);
        }
    }
    const double eps_gap = std::max(1e-6 * (hi - lo), 1e-9);

    // Variables: x_i for active rows, y'_j = -y_j for active columns.
    // in-cell  (i,j): x_i + y_j >= L  ->  y'_j - x_i <= -L      edge x_i -> y'_j
    // out-cell (i,j): x_i + y_j <= L - eps -> x_i - y'_j <= L - eps  edge y'_j -> x_i
    std::vector<int> row_var(static_cast<std::size_t>(m), -1);
    std::vector<int> col_var(static_cast<std::size_t>(n), -1);
    int nv = 0;
    for (int i = 0; i < m; ++i) {
        if (row_active[i]) row_var[i] = nv++;
    }
    for (int j = 0; j < n; ++j) {
        if (col_active[j]) col_var[j] = nv++;
    }

    struct Edge {
        int from, to;
        double w;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i) {
        if (!row_active[i]) continue;
        for (int j = 0; j < n; ++j) {
            const double lp = std::log(instance.price(i, j));
            if (in[i][j]) {
                edges.push_back({row_var[i], col_var[j], -lp});
            } else if (col_active[j]) {
                edges.push_back({col_var[j], row_var[i], lp - eps_gap});
            }
        }
    }

    // Bellman-Ford from a virtual source at distance 0 to every vertex.
    std::vector<double> dist(static_cast<std::size_t>(nv), 0.0);
    for (int pass = 0; pass < nv; ++pass) {
        bool changed = false;
        for (const Edge &e : edges) {
            if (dist[e.from] + e.w < dist[e.to]) {
                dist[e.to] = dist[e.from] + e.w;
                changed = true;
            }
        }
        if (!changed) break;
        if (pass == nv - 1) return std::nullopt; // negative cycle: infeasible
    }

    // Shift x up by eps_gap/2 so both cell classes keep a margin that
    // dominates float rounding in exp and the final product.
    BidAssignment bids;
    bids.row_multipliers.assign(static_cast<std::size_t>(m), 0.0);
    bids.col_multipliers.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        if (row_active[i]) bids.row_multipliers[i] = std::exp(dist[row_var[i]] + eps_gap / 2);
    }
    for (int j = 0; j < n; ++j) {
        if (col_active[j]) bids.col_multipliers[j] = std::exp(-dist[col_var[j]]);
    }

    CaptureSet achieved = capture(instance, bids);
    std::vector<Cell> want(cells);
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    if (achieved.cells != want) return std::nullopt;
    return bids;
}

BruteForceResult brute_force_multiplicative_optimum(const Instance &instance, int limit) {
    const int cells_total = instance.rows() * instance.cols();
    if (cells_total > limit) {
        throw InstanceTooLarge("brute force limited to " + std::to_string(limit) + " cells");
    }

    std::vector<Cell> all;
    std::vector<double> price_of, value_of;
    for (int i = 0; i < instance.rows(); ++i) {
        for (int j = 0; j < instance.cols(); ++j) {
            all.push_back({i, j});
            price_of.push_back(instance.price(i, j));
            value_of.push_back(instance.value(i, j));
        }
    }

    bool have_best = false;
    double best_value = -1.0;
    std::vector<Cell> best_cells;
    BidAssignment best_bids;

    const std::uint64_t masks = 1ull << cells_total;
    std::vector<Cell> subset;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        double spend = 0.0;
        double value = 0.0;
        subset.clear();
        for (int b = 0; b < cells_total; ++b) {
            if (mask >> b & 1u) {
                spend += price_of[b];
                value += value_of[b];
                subset.push_back(all[b]);
            }
        }
        if (spend > instance.budget()) continue;
        const bool better = !have_best || value > best_value ||
                            (value == best_value && subset < best_cells);
        if (!better) continue;
        auto bids = is_capturable(instance, subset);
        if (!bids) continue;
        have_best = true;
        best_value = value;
        best_cells = subset;
        best_bids = std::move(*bids);
    }

    // The empty set is always capturable and feasible, so a best exists.
    BruteForceResult out;
    out.capture = tally_cells(instance, best_cells);
    if (!have_best || best_cells.empty()) {
        out.bids.row_multipliers.assign(static_cast<std::size_t>(instance.rows()), 0.0);
        out.bids.col_multipliers.assign(static_cast<std::size_t>(instance.cols()), 0.0);
    } else {
        out.bids = std::move(best_bids);
    }
    return out;
}

} // namespace multibid
