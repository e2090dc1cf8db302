#pragma once

#include <string>

#include "multibid/algorithms.hpp"

namespace multibid::detail {

/// Assemble a Solution, recomputing the capture from the bids. Throws
/// std::logic_error when the capture overspends; callers repair best-effort
/// bids with shrink_to_budget first.
Solution make_solution(const Instance &instance, BidAssignment bids, std::string tag,
                       nlohmann::json params);

Solution empty_solution(const Instance &instance, std::string tag, nlohmann::json params);

/// Synthesize bids for an intended staircase. Exact synthesis when possible;
/// otherwise best-effort geometric bids from fitted price factors, shrunk to
/// the budget, with the mismatch recorded in params.
Solution solution_from_staircase(const Instance &instance, const Staircase &staircase,
                                 std::string tag, nlohmann::json params, double delta);

/// Raw geometric delta-scheme bids for a staircase, scaled by explicit
/// factors; no validation.
BidAssignment geometric_bids(const Staircase &staircase, double delta,
                             const std::vector<double> &row_factors,
                             const std::vector<double> &col_factors);

} // namespace multibid::detail
