#pragma once

#include <optional>

#include "multibid/instance.hpp"

namespace multibid {

/// Result of the ratio-greedy individual bidding optimum.
struct GreedyOptResult {
    CaptureSet cells;
    double ratio_cutoff = 0.0; // last accepted v/p; +inf when nothing accepted
    bool exhausted = false;    // true iff the budget stopped the greedy
};

/// Individual bidding optimum OPT(budget): accept cells in non-increasing
/// v/p order and stop at the first cell that no longer fits (prefix
/// semantics, no skipping). Zero-value cells are never taken. Ties break by
/// higher value, then row-major index.
GreedyOptResult individual_optimum(const Instance &instance, double budget);

/// Bids capturing exactly `cells`, or nullopt when no bids do.
///
/// Decided in the log domain as a difference-constraint system: in-cells
/// need x_i + y_j >= log p_ij, out-cells x_i + y_j <= log p_ij - eps_gap,
/// feasibility by negative-cycle detection. Rows/columns without an in-cell
/// get multiplier 0 directly. Returned bids round-trip through capture()
/// exactly.
std::optional<BidAssignment> is_capturable(const Instance &instance,
                                           const std::vector<Cell> &cells);

struct BruteForceResult {
    CaptureSet capture;
    BidAssignment bids;
};

/// Exhaustive multiplicative optimum over all 2^(m*n) cell subsets, filtered
/// by budget and capturability. Deterministic tie-break: lexicographically
/// smallest cell set among the maxima. Throws InstanceTooLarge when
/// m*n > limit.
BruteForceResult brute_force_multiplicative_optimum(const Instance &instance, int limit = 16);

} // namespace multibid
