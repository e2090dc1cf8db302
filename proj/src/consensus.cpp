#include "multibid/consensus.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "multibid/errors.hpp"
#include "multibid/rng.hpp"

namespace multibid {

TotalOrder TotalOrder::from_order(std::vector<int> order) {
    TotalOrder t;
    t.rank.assign(order.size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int v = order[k];
        if (v < 0 || v >= static_cast<int>(order.size()) || t.rank[v] != -1) {
            throw ContractViolation("total order is not a permutation");
        }
        t.rank[v] = static_cast<int>(k);
    }
    t.order = std::move(order);
    return t;
}

bool DominanceDigraph::has_edge(int from, int to) const {
    const auto &ch = children[from];
    return std::find(ch.begin(), ch.end(), to) != ch.end();
}

DominanceDigraph build_dominance_digraph(const std::vector<PartialPermutation> &partials,
                                         int m) {
    // Per partial, rank of each row it mentions (-1 = absent).
    std::vector<std::vector<int>> pos(partials.size(),
                                      std::vector<int>(static_cast<std::size_t>(m), -1));
    for (std::size_t p = 0; p < partials.size(); ++p) {
        for (std::size_t k = 0; k < partials[p].rows.size(); ++k) {
            const int r = partials[p].rows[k];
            if (r < 0 || r >= m) throw ContractViolation("partial permutation row out of range");
            if (pos[p][r] != -1) throw ContractViolation("duplicate row in partial permutation");
            pos[p][r] = static_cast<int>(k);
        }
    }

    DominanceDigraph d;
    d.vertices = m;
    d.children.assign(static_cast<std::size_t>(m), {});
    d.parents.assign(static_cast<std::size_t>(m), {});
    for (int i = 0; i < m; ++i) {
        for (int i2 = i + 1; i2 < m; ++i2) {
            int cooccur = 0;
            int i_first = 0;
            for (std::size_t p = 0; p < partials.size(); ++p) {
                const int a = pos[p][i];
                const int b = pos[p][i2];
                if (a < 0 || b < 0) continue;
                ++cooccur;
                if (a < b) ++i_first;
            }
            if (cooccur == 0) continue;
            // Strict majority for (i, i2); everything else, ties included,
            // takes the else-branch.
            if (2 * i_first > cooccur) {
                d.children[i].push_back(i2);
                d.parents[i2].push_back(i);
            } else {
                d.children[i2].push_back(i);
                d.parents[i].push_back(i2);
            }
        }
    }
    return d;
}

namespace {

/// Strict partial order with incremental transitive closure.
class ClosedOrder {
public:
    explicit ClosedOrder(int m)
        : m_(m), less_(static_cast<std::size_t>(m) * m, false) {}

    bool less(int a, int b) const { return less_[static_cast<std::size_t>(a) * m_ + b]; }
    bool comparable(int a, int b) const { return less(a, b) || less(b, a); }

    /// Establish a < b plus everything transitivity implies. Caller must
    /// ensure a, b are incomparable; that guarantees no contradiction.
    void add(int a, int b) {
        std::vector<int> ups{a}, downs{b};
        for (int v = 0; v < m_; ++v) {
            if (less(v, a)) ups.push_back(v);
            if (less(b, v)) downs.push_back(v);
        }
        for (int u : ups) {
            for (int w : downs) {
                less_[static_cast<std::size_t>(u) * m_ + w] = true;
            }
        }
    }

    int count_below(int v) const {
        int c = 0;
        for (int u = 0; u < m_; ++u) {
            if (less(u, v)) ++c;
        }
        return c;
    }

private:
    int m_;
    std::vector<bool> less_;
};

} // namespace

TotalOrder consensus_permutation(const std::vector<PartialPermutation> &partials, int m,
                                 std::uint64_t seed) {
    const DominanceDigraph d = build_dominance_digraph(partials, m);
    ClosedOrder po(m);

    std::mt19937_64 rng(seed);
    std::vector<int> visit(static_cast<std::size_t>(m));
    std::iota(visit.begin(), visit.end(), 0);
    shuffle(visit, rng);

    for (int s : visit) {
        for (int p : d.parents[s]) {
            if (!po.comparable(p, s)) po.add(p, s);
        }
        for (int c : d.children[s]) {
            if (!po.comparable(s, c)) po.add(s, c);
        }
    }
    // Deterministic completion: first incomparable pair in index order gets
    // the ascending orientation.
    for (int i = 0; i < m; ++i) {
        for (int i2 = i + 1; i2 < m; ++i2) {
            if (!po.comparable(i, i2)) po.add(i, i2);
        }
    }

    std::vector<int> order(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
        order[static_cast<std::size_t>(po.count_below(v))] = v;
    }
    return TotalOrder::from_order(std::move(order));
}

double quality(const TotalOrder &order, const std::vector<PartialPermutation> &partials) {
    long long agreements = 0;
    long long pairs = 0;
    for (const PartialPermutation &p : partials) {
        const std::size_t k = p.rows.size();
        if (k < 2) continue;
        pairs += static_cast<long long>(k) * (k - 1) / 2;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                if (order.before(p.rows[a], p.rows[b])) ++agreements;
            }
        }
    }
    if (pairs == 0) return 1.0;
    return static_cast<double>(agreements) / static_cast<double>(pairs);
}

} // namespace multibid
