#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multibid/errors.hpp"

namespace multibid {

struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell &) const = default;
};

/// Known-multiplicative price structure: p_ij = rows[i] * cols[j].
struct Factorization {
    std::vector<double> rows;
    std::vector<double> cols;
};

/// One problem: an m x n grid of prices and values plus a budget.
///
/// Immutable after construction; the constructor rejects non-positive prices,
/// negative values, a non-positive budget, and a factorization that does not
/// reproduce the price matrix to 1e-9 relative.
class Instance {
public:
    Instance(int m, int n, std::vector<double> prices, std::vector<double> values,
             double budget, std::optional<Factorization> factorization = std::nullopt);

    int rows() const { return m_; }
    int cols() const { return n_; }
    double budget() const { return budget_; }

    double price(int i, int j) const { return prices_[idx(i, j)]; }
    double value(int i, int j) const { return values_[idx(i, j)]; }
    const std::vector<double> &prices() const { return prices_; }
    const std::vector<double> &values() const { return values_; }
    const std::optional<Factorization> &factorization() const { return factorization_; }

    double total_price() const;

    /// max p_ij / B; the "small cost" statistic. Reported, never enforced.
    double max_price_budget_ratio() const;

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    int m_ = 0;
    int n_ = 0;
    std::vector<double> prices_;
    std::vector<double> values_;
    double budget_ = 0.0;
    std::optional<Factorization> factorization_;
};

/// Row and column bid multipliers; 0 removes a row or column.
struct BidAssignment {
    std::vector<double> row_multipliers;
    std::vector<double> col_multipliers;
};

/// Cells whose effective bid reached their price, with spend/value totals.
struct CaptureSet {
    std::vector<Cell> cells; // sorted row-major
    double spend = 0.0;
    double value = 0.0;

    bool empty() const { return cells.empty(); }
    std::size_t size() const { return cells.size(); }
};

/// Canonical form of a nested-column configuration: each column's cells are
/// the first heights[j] entries of row_order. row_order[0] is the bottom row,
/// the one contained in the most columns.
struct Staircase {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_order; // permutation of [rows]
    std::vector<int> heights;   // per original column, 0..rows

    std::vector<Cell> cells() const; // expanded, sorted row-major
    bool empty() const;
    /// Column indices sorted by decreasing height, ties by column index.
    std::vector<int> columns_by_height() const;
};

/// Solver output. capture always equals capture(instance, bids) and respects
/// the budget.
struct Solution {
    BidAssignment bids;
    CaptureSet capture;
    std::string algorithm_tag;
    nlohmann::json params = nlohmann::json::object();
};

/// The cells with r_i * c_j >= p_ij, exact comparison, no tolerance.
CaptureSet capture(const Instance &instance, const BidAssignment &bids);

/// Recompute totals for an explicit cell set (cells need not be capturable).
CaptureSet tally_cells(const Instance &instance, std::vector<Cell> cells);

bool is_feasible(const Instance &instance, const BidAssignment &bids);

/// True iff the column row-sets are pairwise nested.
bool is_staircase(const std::vector<Cell> &cells, int m, int n);

/// Canonical (row_order, heights) form; throws NotAStaircase.
Staircase canonicalize_staircase(const std::vector<Cell> &cells, int m, int n);

nlohmann::json to_json(const Instance &instance);
Instance instance_from_json(const nlohmann::json &j);
Instance load_instance(const std::string &path);
void save_instance(const Instance &instance, const std::string &path);

} // namespace multibid
