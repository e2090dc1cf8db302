#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "multibid/algorithms.hpp"
#include "multibid/consensus.hpp"
#include "multibid/validate.hpp"
#include "solver_common.hpp"

namespace multibid {

SolverParams SolverParams::from_json(const nlohmann::json &j) {
    SolverParams p;
    if (j.contains("budget_buckets")) p.budget_buckets = j.at("budget_buckets").get<int>();
    if (j.contains("delta")) p.delta = j.at("delta").get<double>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("use_area_heuristic")) {
        p.use_area_heuristic = j.at("use_area_heuristic").get<bool>();
    }
    if (p.budget_buckets < 0) throw ContractViolation("budget_buckets must be >= 0");
    if (!(p.delta > 0.0) || p.delta >= 1.0) throw ContractViolation("delta must be in (0,1)");
    return p;
}

nlohmann::json SolverParams::to_json() const {
    return {{"budget_buckets", budget_buckets},
            {"delta", delta},
            {"seed", seed},
            {"use_area_heuristic", use_area_heuristic}};
}

namespace detail {

Solution make_solution(const Instance &instance, BidAssignment bids, std::string tag,
                       nlohmann::json params) {
    Solution sol;
    sol.capture = capture(instance, bids);
    if (sol.capture.spend > instance.budget()) {
        throw std::logic_error("solver produced an infeasible capture: " + tag);
    }
    sol.bids = std::move(bids);
    sol.algorithm_tag = std::move(tag);
    sol.params = std::move(params);
    return sol;
}

Solution empty_solution(const Instance &instance, std::string tag, nlohmann::json params) {
    BidAssignment bids;
    bids.row_multipliers.assign(static_cast<std::size_t>(instance.rows()), 0.0);
    bids.col_multipliers.assign(static_cast<std::size_t>(instance.cols()), 0.0);
    return make_solution(instance, std::move(bids), std::move(tag), std::move(params));
}

BidAssignment geometric_bids(const Staircase &staircase, double delta,
                             const std::vector<double> &row_factors,
                             const std::vector<double> &col_factors) {
    std::vector<int> levels(staircase.heights); // distinct positive heights, descending
    std::sort(levels.begin(), levels.end(), std::greater<int>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (!levels.empty() && levels.back() == 0) levels.pop_back();

    BidAssignment bids;
    bids.row_multipliers.assign(static_cast<std::size_t>(staircase.rows), 0.0);
    bids.col_multipliers.assign(static_cast<std::size_t>(staircase.cols), 0.0);
    if (levels.empty()) return bids;

    const int max_height = levels.front();
    for (int pos = 0; pos < max_height; ++pos) {
        // Number of column height groups covering this stack position.
        int k = 0;
        while (k < static_cast<int>(levels.size()) && levels[k] > pos) ++k;
        const int row = staircase.row_order[pos];
        bids.row_multipliers[row] = row_factors[row] * std::pow(1.0 / delta, 2 * k - 1);
    }
    for (int j = 0; j < staircase.cols; ++j) {
        if (staircase.heights[j] == 0) continue;
        const auto it = std::find(levels.begin(), levels.end(), staircase.heights[j]);
        const int k = static_cast<int>(it - levels.begin()); // 0 = tallest group
        bids.col_multipliers[j] = col_factors[j] * std::pow(delta, 2 * k);
    }
    return bids;
}

Solution solution_from_staircase(const Instance &instance, const Staircase &staircase,
                                 std::string tag, nlohmann::json params, double delta) {
    try {
        BidAssignment bids = staircase_bids(instance, staircase);
        params["capture_matches_intent"] = true;
        return make_solution(instance, std::move(bids), std::move(tag), std::move(params));
    } catch (const SynthesisFailed &) {
        // Practical mode: the intended cells are not exactly capturable on
        // these prices. Ship best-effort bids and report what they achieve.
        std::vector<double> rf, cf;
        if (instance.factorization()) {
            rf = instance.factorization()->rows;
            cf = instance.factorization()->cols;
        } else {
            const MultiplicativeFit fit = fit_multiplicative(instance);
            rf = fit.rows;
            cf = fit.cols;
        }
        BidAssignment bids = geometric_bids(staircase, delta, rf, cf);
        bids = shrink_to_budget(instance, bids);
        const CaptureSet intended = tally_cells(instance, staircase.cells());
        params["capture_matches_intent"] = false;
        params["intended_value"] = intended.value;
        return make_solution(instance, std::move(bids), std::move(tag), std::move(params));
    }
}

} // namespace detail

BidAssignment staircase_bids(const Instance &instance, const Staircase &staircase) {
    if (staircase.rows != instance.rows() || staircase.cols != instance.cols()) {
        throw ContractViolation("staircase dimensions do not match instance");
    }
    auto bids = is_capturable(instance, staircase.cells());
    if (!bids) {
        throw SynthesisFailed("no bids capture the staircase exactly");
    }
    return *bids;
}

BidAssignment staircase_bids_geometric(const Instance &instance, const Staircase &staircase,
                                       double delta) {
    if (staircase.rows != instance.rows() || staircase.cols != instance.cols()) {
        throw ContractViolation("staircase dimensions do not match instance");
    }
    if (!(delta > 0.0) || delta >= 1.0) {
        throw ContractViolation("delta must be in (0,1)");
    }
    std::vector<double> rf(static_cast<std::size_t>(instance.rows()), 1.0);
    std::vector<double> cf(static_cast<std::size_t>(instance.cols()), 1.0);
    if (instance.factorization()) {
        rf = instance.factorization()->rows;
        cf = instance.factorization()->cols;
    }
    std::vector<Cell> want = staircase.cells();

    int groups = 0;
    for (int h : staircase.heights) {
        if (h > 0) ++groups;
    }
    for (;;) {
        const double tiniest = std::pow(delta, 2 * groups - 1);
        if (tiniest == 0.0 || !std::isfinite(1.0 / tiniest)) {
            throw SynthesisFailed("geometric bids underflow before capturing exactly");
        }
        BidAssignment bids = detail::geometric_bids(staircase, delta, rf, cf);
        if (capture(instance, bids).cells == want) return bids;
        delta /= 2.0;
    }
}

BidAssignment shrink_to_budget(const Instance &instance, BidAssignment bids) {
    if (capture(instance, bids).spend <= instance.budget()) return bids;

    // Scale factors where the capture set can change.
    std::vector<double> thresholds;
    for (int i = 0; i < instance.rows(); ++i) {
        for (int j = 0; j < instance.cols(); ++j) {
            const double eff = bids.row_multipliers[i] * bids.col_multipliers[j];
            if (eff > 0.0) {
                const double t = instance.price(i, j) / eff;
                if (t <= 1.0) thresholds.push_back(t);
            }
        }
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    auto scaled = [&](double t) {
        BidAssignment b = bids;
        for (double &r : b.row_multipliers) r *= t;
        return b;
    };
    // Spend is monotone in the scale; find the largest feasible threshold.
    int lo = -1;
    int hi = static_cast<int>(thresholds.size()) - 1; // feasible..infeasible boundary
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (capture(instance, scaled(thresholds[mid])).spend <= instance.budget()) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (lo < 0) {
        bids.row_multipliers.assign(bids.row_multipliers.size(), 0.0);
        bids.col_multipliers.assign(bids.col_multipliers.size(), 0.0);
        return bids;
    }
    return scaled(thresholds[lo]);
}

// ---------------------------------------------------------------------------
// Budget-bucketed column DP shared by the staircase and tower DPs
// ---------------------------------------------------------------------------

namespace {

struct ColumnChoice {
    double spend = 0.0;
    double value = 0.0;
    int id = 0;
};

struct DpOutcome {
    std::vector<int> choice_per_column;
    double value = 0.0;
};

/// Maximize total value over one choice per column with total spend <= B.
/// buckets > 0: spend rounds up to bucket boundaries, so the chosen set
/// never overspends. buckets == 0: exact Pareto DP over (spend, value).
DpOutcome budget_dp(const std::vector<std::vector<ColumnChoice>> &choices, double budget,
                    int buckets) {
    const int n = static_cast<int>(choices.size());
    DpOutcome out;
    out.choice_per_column.assign(static_cast<std::size_t>(n), 0);

    if (buckets > 0) {
        const int G = buckets;
        auto weight = [&](double spend) -> int {
            if (spend <= 0.0) return 0;
            const int w = static_cast<int>(std::ceil(spend * G / budget));
            return w;
        };
        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        std::vector<double> dp(static_cast<std::size_t>(G) + 1, kNegInf);
        dp[0] = 0.0;
        // parent[j][g] = chosen candidate index for column j at bucket g
        std::vector<std::vector<int>> parent(static_cast<std::size_t>(n),
                                             std::vector<int>(static_cast<std::size_t>(G) + 1, -1));
        for (int j = 0; j < n; ++j) {
            std::vector<double> next(static_cast<std::size_t>(G) + 1, kNegInf);
            for (int g = 0; g <= G; ++g) {
                if (dp[g] == kNegInf) continue;
                for (std::size_t c = 0; c < choices[j].size(); ++c) {
                    const ColumnChoice &ch = choices[j][c];
                    if (ch.spend > budget) continue;
                    const int w = weight(ch.spend);
                    if (g + w > G) continue;
                    if (dp[g] + ch.value > next[g + w]) {
                        next[g + w] = dp[g] + ch.value;
                        parent[j][g + w] = static_cast<int>(c);
                    }
                }
            }
            dp = std::move(next);
        }
        int best_g = 0;
        for (int g = 1; g <= G; ++g) {
            if (dp[g] > dp[best_g]) best_g = g;
        }
        out.value = dp[best_g] == kNegInf ? 0.0 : dp[best_g];
        // Backtrack; the recorded parent at (j, g) pins the choice and its
        // bucket weight.
        int g = best_g;
        for (int j = n - 1; j >= 0; --j) {
            const int c = parent[j][g];
            if (c < 0) { // column j contributed the zero choice implicitly
                out.choice_per_column[j] = 0;
                continue;
            }
            out.choice_per_column[j] = choices[j][c].id;
            g -= weight(choices[j][c].spend);
        }
        return out;
    }

    // Exact mode: Pareto frontier of (spend, value) states per column.
    struct State {
        double spend;
        double value;
        int choice;
        int parent; // index into the previous column's state list
    };
    std::vector<std::vector<State>> layers;
    layers.push_back({{0.0, 0.0, -1, -1}});
    for (int j = 0; j < n; ++j) {
        std::vector<State> merged;
        const std::vector<State> &prev = layers.back();
        for (std::size_t s = 0; s < prev.size(); ++s) {
            for (std::size_t c = 0; c < choices[j].size(); ++c) {
                const double spend = prev[s].spend + choices[j][c].spend;
                if (spend > budget) continue;
                merged.push_back({spend, prev[s].value + choices[j][c].value,
                                  choices[j][c].id, static_cast<int>(s)});
            }
        }
        std::sort(merged.begin(), merged.end(), [](const State &a, const State &b) {
            if (a.spend != b.spend) return a.spend < b.spend;
            return a.value > b.value;
        });
        std::vector<State> frontier;
        double best = -1.0;
        for (const State &st : merged) {
            if (st.value > best) {
                frontier.push_back(st);
                best = st.value;
            }
        }
        if (frontier.size() > 2'000'000) {
            throw ContractViolation("exact DP frontier too large; use budget buckets");
        }
        layers.push_back(std::move(frontier));
    }
    int idx = 0;
    for (std::size_t s = 0; s < layers.back().size(); ++s) {
        if (layers.back()[s].value > layers.back()[idx].value) idx = static_cast<int>(s);
    }
    out.value = layers.back()[idx].value;
    for (int j = n - 1; j >= 0; --j) {
        const State &st = layers[static_cast<std::size_t>(j) + 1][idx];
        out.choice_per_column[j] = st.choice < 0 ? 0 : st.choice;
        idx = st.parent;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

Solution staircase_dp_solve(const Instance &instance, const SolverParams &params) {
    const int m = instance.rows();
    const int n = instance.cols();

    // One shared row order from the per-column v/p orderings.
    std::vector<PartialPermutation> partials;
    partials.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        PartialPermutation p;
        p.column_id = j;
        p.rows.resize(static_cast<std::size_t>(m));
        std::iota(p.rows.begin(), p.rows.end(), 0);
        std::stable_sort(p.rows.begin(), p.rows.end(), [&](int a, int b) {
            return instance.value(a, j) / instance.price(a, j) <
                   instance.value(b, j) / instance.price(b, j);
        });
        partials.push_back(std::move(p));
    }
    const TotalOrder consensus = consensus_permutation(partials, m, params.seed);
    std::vector<int> best_first(consensus.order.rbegin(), consensus.order.rend());

    // Per column: bottom prefixes of the shared order, with cumulative
    // spend/value. Prefixes of one order are nested, hence a staircase.
    std::vector<std::vector<ColumnChoice>> choices(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        choices[j].reserve(static_cast<std::size_t>(m) + 1);
        double spend = 0.0;
        double value = 0.0;
        choices[j].push_back({0.0, 0.0, 0});
        for (int k = 0; k < m; ++k) {
            spend += instance.price(best_first[k], j);
            value += instance.value(best_first[k], j);
            choices[j].push_back({spend, value, k + 1});
        }
    }

    const DpOutcome dp = budget_dp(choices, instance.budget(), params.budget_buckets);

    Staircase st;
    st.rows = m;
    st.cols = n;
    st.row_order = best_first;
    st.heights = dp.choice_per_column;
    nlohmann::json p{{"budget_buckets", params.budget_buckets}, {"seed", params.seed}};
    return detail::solution_from_staircase(instance, st, "staircase-dp", std::move(p),
                                           params.delta);
}

Solution tower_dp_solve(const Instance &instance, const SolverParams &params) {
    const StripDecomposition strips = build_strips(instance, params.seed);
    const int n = instance.cols();

    int max_height = 0;
    for (const Strip &s : strips.strips) max_height = std::max(max_height, s.height());

    double best_value = -1.0;
    int best_h = 0;
    std::vector<int> best_take; // chosen qualifying-strip count per column
    std::vector<int> best_strips;

    for (int h = 1; h <= max_height; ++h) {
        std::vector<int> qualifying; // cheapest-first strips tall enough for h
        for (std::size_t s = 0; s < strips.strips.size(); ++s) {
            if (strips.strips[s].height() >= h) qualifying.push_back(static_cast<int>(s));
        }
        if (qualifying.empty()) continue;

        std::vector<std::vector<ColumnChoice>> choices(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            choices[j].push_back({0.0, 0.0, 0});
            double spend = 0.0;
            double value = 0.0;
            for (std::size_t q = 0; q < qualifying.size(); ++q) {
                for (int row : strips.strips[qualifying[q]].bottom_rows(h)) {
                    spend += instance.price(row, j);
                    value += instance.value(row, j);
                }
                choices[j].push_back({spend, value, static_cast<int>(q) + 1});
            }
        }
        const DpOutcome dp = budget_dp(choices, instance.budget(), params.budget_buckets);
        if (dp.value > best_value) {
            best_value = dp.value;
            best_h = h;
            best_take = dp.choice_per_column;
            best_strips = qualifying;
        }
    }

    nlohmann::json p{{"budget_buckets", params.budget_buckets},
                     {"seed", params.seed},
                     {"h", best_h}};
    if (best_h == 0) {
        return detail::empty_solution(instance, "tower-dp", std::move(p));
    }
    std::vector<Cell> cells;
    for (int j = 0; j < n; ++j) {
        for (int q = 0; q < best_take[j]; ++q) {
            for (int row : strips.strips[best_strips[q]].bottom_rows(best_h)) {
                cells.push_back({row, j});
            }
        }
    }
    const Staircase st = canonicalize_staircase(cells, instance.rows(), n);
    return detail::solution_from_staircase(instance, st, "tower-dp", std::move(p), params.delta);
}

Solution ratio_monotone_solve(const Instance &instance, const SolverParams &params) {
    const GreedyOptResult opt = individual_optimum(instance, instance.budget());
    if (is_staircase(opt.cells.cells, instance.rows(), instance.cols())) {
        try {
            const Staircase st =
                canonicalize_staircase(opt.cells.cells, instance.rows(), instance.cols());
            BidAssignment bids = staircase_bids(instance, st);
            nlohmann::json p{{"mode", "exact-staircase"}, {"opt_is_staircase", true}};
            return detail::make_solution(instance, std::move(bids), "ratio", std::move(p));
        } catch (const SynthesisFailed &) {
            // Staircase-shaped optimum that no bids reproduce on these
            // prices; treat like the non-staircase case.
        }
    }
    Solution sol = staircase_dp_solve(instance, params);
    sol.algorithm_tag = "ratio";
    sol.params["mode"] = "staircase-dp-fallback";
    sol.params["opt_is_staircase"] = is_staircase(opt.cells.cells, instance.rows(), instance.cols());
    return sol;
}

std::vector<SqrtCandidate> sqrt_n_candidates(const Instance &instance) {
    const int m = instance.rows();
    const int n = instance.cols();
    const double budget = instance.budget();
    const GreedyOptResult opt = individual_optimum(instance, budget);

    // OPT prices by column for incremental row-max bookkeeping.
    std::vector<std::vector<std::pair<int, double>>> opt_in_col(static_cast<std::size_t>(n));
    for (const Cell &c : opt.cells.cells) {
        opt_in_col[c.col].push_back({c.row, instance.price(c.row, c.col)});
    }

    int root = 1;
    while (root * root < n) ++root; // ceil(sqrt(n))

    std::vector<bool> in_u(static_cast<std::size_t>(n), true);
    int u_size = n;
    std::vector<SqrtCandidate> candidates;

    auto build_bids = [&](const std::vector<int> &cols) {
        BidAssignment bids;
        bids.row_multipliers.assign(static_cast<std::size_t>(m), 0.0);
        bids.col_multipliers.assign(static_cast<std::size_t>(n), 0.0);
        for (int j : cols) {
            bids.col_multipliers[j] = 1.0;
            for (const auto &[row, price] : opt_in_col[j]) {
                bids.row_multipliers[row] = std::max(bids.row_multipliers[row], price);
            }
        }
        return bids;
    };
    auto push_candidate = [&](const std::vector<int> &cols) {
        SqrtCandidate cand;
        cand.columns = cols;
        cand.bids = build_bids(cols);
        const CaptureSet cap = capture(instance, cand.bids);
        cand.value = cap.value;
        cand.spend = cap.spend;
        candidates.push_back(std::move(cand));
    };

    while (u_size > 2 * root) {
        std::vector<int> v;
        std::vector<double> row_max(static_cast<std::size_t>(m), 0.0);
        double total = 0.0;
        // Greedy ascending scan; the constraint only tightens as V grows, so
        // one pass yields a maximal set.
        for (int j = 0; j < n && static_cast<int>(v.size()) < root; ++j) {
            if (!in_u[j]) continue;
            double delta = 0.0;
            for (const auto &[row, price] : opt_in_col[j]) {
                delta += std::max(0.0, price - row_max[row]);
            }
            const int new_size = static_cast<int>(v.size()) + 1;
            if (total + delta <= budget / new_size) {
                v.push_back(j);
                total += delta;
                for (const auto &[row, price] : opt_in_col[j]) {
                    row_max[row] = std::max(row_max[row], price);
                }
            }
        }
        if (v.empty()) break; // cannot happen: singletons always satisfy the bound
        push_candidate(v);
        for (int j : v) in_u[j] = false;
        u_size -= static_cast<int>(v.size());
    }
    for (int j = 0; j < n; ++j) {
        if (in_u[j]) push_candidate({j});
    }
    return candidates;
}

Solution sqrt_n_solve(const Instance &instance) {
    const std::vector<SqrtCandidate> candidates = sqrt_n_candidates(instance);
    int best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        if (candidates[c].value > candidates[best].value) best = static_cast<int>(c);
    }
    nlohmann::json p{{"candidates", candidates.size()},
                     {"chosen_columns", candidates[best].columns}};
    BidAssignment bids = shrink_to_budget(instance, candidates[best].bids);
    return detail::make_solution(instance, std::move(bids), "sqrt", std::move(p));
}

Solution uniform_bid_solve(const Instance &instance) {
    // Cells sorted by price give cumulative spend per candidate bid.
    std::vector<double> prices = instance.prices();
    std::sort(prices.begin(), prices.end());
    std::vector<double> candidate; // distinct prices ascending
    std::vector<double> spend_at;  // total spend when bidding that price
    double run = 0.0;
    for (std::size_t k = 0; k < prices.size(); ++k) {
        run += prices[k];
        if (k + 1 == prices.size() || prices[k + 1] != prices[k]) {
            candidate.push_back(prices[k]);
            spend_at.push_back(run);
        }
    }
    // spend_at is increasing; largest feasible candidate by binary search.
    int lo = -1;
    int hi = static_cast<int>(candidate.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (spend_at[mid] <= instance.budget()) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (lo < 0) {
        return detail::empty_solution(instance, "uniform", {{"bid", 0.0}});
    }
    const double bid = candidate[lo];
    BidAssignment bids;
    bids.row_multipliers.assign(static_cast<std::size_t>(instance.rows()), bid);
    bids.col_multipliers.assign(static_cast<std::size_t>(instance.cols()), 1.0);
    return detail::make_solution(instance, std::move(bids), "uniform", {{"bid", bid}});
}

} // namespace multibid
