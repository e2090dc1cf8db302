#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multibid/instance.hpp"
#include "multibid/oracles.hpp"

namespace multibid {

/// Knobs shared by the solvers; accepted on the wire as
/// {"budget_buckets":int, "delta":num, "seed":int, "use_area_heuristic":bool}.
struct SolverParams {
    int budget_buckets = 200; // 0 = exact Pareto DP over spend/value states
    double delta = 1e-3;      // geometric bid constructor base
    std::uint64_t seed = 0;
    bool use_area_heuristic = false;

    static SolverParams from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

// ---------------------------------------------------------------------------
// Staircase bid synthesis
// ---------------------------------------------------------------------------

/// Bids capturing exactly the staircase, via the difference-constraint
/// synthesis. Always succeeds on multiplicative prices; throws
/// SynthesisFailed otherwise when no bids reproduce the set.
BidAssignment staircase_bids(const Instance &instance, const Staircase &staircase);

/// The geometric delta-scheme: within-staircase effective bids at least
/// 1/delta, outside at most delta, scaled by the price factorization when
/// present. delta is halved until the capture round-trips exactly; throws
/// SynthesisFailed on underflow.
BidAssignment staircase_bids_geometric(const Instance &instance, const Staircase &staircase,
                                       double delta = 1e-3);

/// Largest uniform row-multiplier scale-down whose capture fits the budget.
/// The capture sets under scaling form a chain, so the result is the maximal
/// feasible member; used as a deterministic repair for best-effort bids.
BidAssignment shrink_to_budget(const Instance &instance, BidAssignment bids);

// ---------------------------------------------------------------------------
// Strips and towers
// ---------------------------------------------------------------------------

/// Rows sharing one power-of-2-rounded row price factor, ordered by
/// increasing value; back() is the bottom row.
struct Strip {
    double level = 0.0;
    std::vector<int> rows;

    int height() const { return static_cast<int>(rows.size()); }
    /// Bottom h rows (at most height()).
    std::vector<int> bottom_rows(int h) const;
};

struct StripDecomposition {
    std::vector<Strip> strips;          // levels strictly increasing
    std::vector<double> row_price_used; // the p_i the decomposition came from
};

/// Requires row factors from the instance factorization or a multiplicative
/// fit; throws MissingFactorization when neither is possible. The seed feeds
/// the consensus ordering used when a strip's values are not exactly
/// monotone.
StripDecomposition build_strips(const Instance &instance, std::uint64_t seed = 0);

/// Width-1 bottom-anchored run of OPT(B/4) cells in one (strip, column).
struct Tower {
    int strip = 0;
    int col = 0;
    int height = 0;
    std::vector<int> rows_bottom_up;      // original row ids
    std::vector<double> prices_bottom_up; // rounded accounting prices
    std::vector<double> values_bottom_up; // true values
};

/// Step function built by juxtaposing towers in height-descending order:
/// step[t] sums the accounting prices of all cells at height t, and area is
/// the total accounting price.
struct TowerProfile {
    std::vector<Tower> towers; // height descending, ties by (strip, col)
    std::vector<double> step;  // 1-based by height; step[0] unused
    double area = 0.0;
    int height_domain = 0; // the m of f : (0, m]

    static TowerProfile from_towers(std::vector<Tower> towers, int height_domain);
    /// Synthetic profile from an explicit step function (step[1..m]).
    static TowerProfile from_step(std::vector<double> step_one_based);
};

/// Everything the tower algorithms share: strips, the rounded-price
/// accounting instance, OPT(B/4) on it, and the induced towers.
struct TowerContext {
    StripDecomposition strips;
    Instance rounded;
    GreedyOptResult opt_quarter;
    std::vector<Tower> towers;
    TowerProfile profile;
};

TowerContext build_tower_context(const Instance &instance, std::uint64_t seed = 0);

/// ALG_h: bottom-h subtowers of all towers of height >= h plus upward
/// propagation into every higher strip of height >= h.
std::vector<Cell> alg_h_cells(const StripDecomposition &strips,
                              const std::vector<Tower> &towers, int h);

struct TowerCandidate {
    int height = 0;
    std::vector<Cell> cells;
    double spend = 0.0; // true prices
    double value = 0.0; // true values
};

/// One candidate per distinct tower height, ascending.
std::vector<TowerCandidate> tower_candidates(const Instance &instance,
                                             const TowerContext &context);

/// Area-lemma height selection: follow t_1 = m, t_{i+1} = f^{-1}(A/t_i) and
/// return the visited integer height whose budget rectangle [0,h]x[0,A/h]
/// overlaps the region under the step function the most. Throws EmptyProfile.
int select_height_area(const TowerProfile &profile);

/// Overlap of [0,h]x[0,A/h] with the region under the profile step function.
double rectangle_overlap(const TowerProfile &profile, int h);

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

/// Exact when the greedy optimum is a capturable staircase (monotone v/p);
/// falls back to the staircase DP otherwise.
Solution ratio_monotone_solve(const Instance &instance, const SolverParams &params = {});

struct SqrtCandidate {
    std::vector<int> columns;
    BidAssignment bids;
    double value = 0.0;
    double spend = 0.0;
};

/// The greedy column-grouping candidates whose union captures every OPT cell.
std::vector<SqrtCandidate> sqrt_n_candidates(const Instance &instance);

/// O(sqrt n) approximation: best of the grouped-column candidates.
Solution sqrt_n_solve(const Instance &instance);

/// O(log m) approximation: best ALG_h over distinct tower heights.
Solution tower_solve(const Instance &instance, const SolverParams &params = {});

/// Heuristic variant driven by select_height_area, with per-height spend
/// capped at the profile area.
Solution tower_solve_area(const Instance &instance, const SolverParams &params = {});

/// DP over columns x budget buckets where each column takes a bottom prefix
/// of one consensus row order.
Solution staircase_dp_solve(const Instance &instance, const SolverParams &params = {});

/// DP over columns x budget buckets where each column takes height-h bottom
/// subtowers in the cheapest i strips; best over h.
Solution tower_dp_solve(const Instance &instance, const SolverParams &params = {});

/// Largest single bid placed on all cells within budget.
Solution uniform_bid_solve(const Instance &instance);

} // namespace multibid
