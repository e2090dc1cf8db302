#pragma once

#include <cstdint>
#include <vector>

namespace multibid {

/// One column's ordering of the rows it has data for, ascending.
struct PartialPermutation {
    int column_id = 0;
    std::vector<int> rows; // no duplicates
};

/// A permutation of [m] with O(1) rank lookup.
struct TotalOrder {
    std::vector<int> order; // order[k] = element at position k
    std::vector<int> rank;  // rank[i] = position of element i

    static TotalOrder from_order(std::vector<int> order);
    bool before(int a, int b) const { return rank[a] < rank[b]; }
};

/// Majority-vote dominance digraph over [m]. Exactly one edge per
/// co-occurring pair: i -> i' when strictly more than half of the
/// co-occurrences place i first, else i' -> i (ties included, pairs
/// iterated with i < i' by index). No edge for pairs that never co-occur.
struct DominanceDigraph {
    int vertices = 0;
    std::vector<std::vector<int>> children; // edge v -> child
    std::vector<std::vector<int>> parents;

    bool has_edge(int from, int to) const;
};

DominanceDigraph build_dominance_digraph(const std::vector<PartialPermutation> &partials, int m);

/// Heuristic consensus order: visit vertices in seeded-random order, orient
/// each against its digraph parents/children where still incomparable while
/// keeping a transitively-closed strict partial order (relations that would
/// contradict the closure are skipped), then extend deterministically by
/// ascending index.
TotalOrder consensus_permutation(const std::vector<PartialPermutation> &partials, int m,
                                 std::uint64_t seed);

/// Fraction of ordered pairs of each partial that the total order agrees
/// with; columns with fewer than two entries contribute nothing. Returns 1
/// when no pair exists.
double quality(const TotalOrder &order, const std::vector<PartialPermutation> &partials);

} // namespace multibid
