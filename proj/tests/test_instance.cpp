#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "multibid/generators.hpp"
#include "multibid/instance.hpp"
#include "multibid/oracles.hpp"
#include "multibid/rng.hpp"

using namespace multibid;

namespace {

Instance ones_instance(int m, int n, double budget) {
    return Instance(m, n, std::vector<double>(static_cast<std::size_t>(m) * n, 1.0),
                    std::vector<double>(static_cast<std::size_t>(m) * n, 1.0), budget);
}

BidAssignment constant_bids(int m, int n, double r, double c) {
    BidAssignment b;
    b.row_multipliers.assign(static_cast<std::size_t>(m), r);
    b.col_multipliers.assign(static_cast<std::size_t>(n), c);
    return b;
}

Staircase random_staircase(int m, int n, std::mt19937_64 &rng) {
    Staircase s;
    s.rows = m;
    s.cols = n;
    s.row_order.resize(static_cast<std::size_t>(m));
    std::iota(s.row_order.begin(), s.row_order.end(), 0);
    shuffle(s.row_order, rng);
    s.heights.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) s.heights[j] = uniform_int(rng, 0, m);
    return s;
}

} // namespace

TEST_CASE("instance construction validates invariants") {
    CHECK_THROWS_AS(ones_instance(0, 2, 1.0), ContractViolation);
    CHECK_THROWS_AS(Instance(1, 1, {0.0}, {1.0}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Instance(1, 1, {1.0}, {-1.0}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Instance(1, 1, {1.0}, {1.0}, 0.0), ContractViolation);
    CHECK_THROWS_AS(Instance(1, 2, {1.0, 2.0}, {0.0, 0.0}, 1.0,
                             Factorization{{1.0}, {1.0, 3.0}}),
                    ContractViolation);
    const Instance ok(1, 2, {1.0, 2.0}, {0.0, 0.0}, 1.0, Factorization{{1.0}, {1.0, 2.0}});
    CHECK(ok.price(0, 1) == 2.0);
}

TEST_CASE("capture on the all-ones grid") {
    const Instance inst = ones_instance(2, 2, 4.0);
    const CaptureSet all = capture(inst, constant_bids(2, 2, 1.0, 1.0));
    CHECK(all.cells.size() == 4);
    CHECK(all.spend == 4.0);

    const CaptureSet none = capture(inst, constant_bids(2, 2, 0.0, 1.0));
    CHECK(none.cells.empty());
    CHECK(none.spend == 0.0);
    CHECK(none.value == 0.0);

    CHECK_THROWS_AS(capture(inst, constant_bids(3, 2, 1.0, 1.0)), ContractViolation);
}

TEST_CASE("the regular staircase bids of the geometric scheme capture exactly") {
    // 4x4 unit prices; staircase {(i,j) : i+j >= 3}. Rows top-to-bottom get
    // 1/d, 1/d^3, 1/d^5, 1/d^7; columns left-to-right d^6, d^4, d^2, 1.
    const double d = 1e-3;
    const Instance inst = ones_instance(4, 4, 1e9);
    BidAssignment bids;
    bids.row_multipliers = {1 / d, std::pow(1 / d, 3), std::pow(1 / d, 5), std::pow(1 / d, 7)};
    bids.col_multipliers = {std::pow(d, 6), std::pow(d, 4), d * d, 1.0};
    const CaptureSet got = capture(inst, bids);
    std::vector<Cell> want;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i + j >= 3) want.push_back({i, j});
        }
    }
    CHECK(got.cells == want);
}

TEST_CASE("is_feasible compares spend against the budget") {
    CHECK(is_feasible(ones_instance(2, 2, 4.0), constant_bids(2, 2, 1.0, 1.0)));
    CHECK_FALSE(is_feasible(ones_instance(2, 2, 3.0), constant_bids(2, 2, 1.0, 1.0)));
}

TEST_CASE("no feasible bids capture three diagonal cells of the n=4 hard instance") {
    // Oracle derivation: every subset holding >= 3 diagonal cells within the
    // budget is uncapturable, so bids capturing three diagonals must
    // overspend.
    const Instance inst = gen_diagonal_hard(4);
    int candidates = 0;
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
        std::vector<Cell> cells;
        int diagonals = 0;
        double spend = 0.0;
        for (int b = 0; b < 16; ++b) {
            if (mask >> b & 1u) {
                const Cell c{b / 4, b % 4};
                cells.push_back(c);
                spend += 1.0;
                if (c.row == c.col) ++diagonals;
            }
        }
        if (diagonals < 3 || spend > inst.budget()) continue;
        ++candidates;
        CHECK_FALSE(is_capturable(inst, cells).has_value());
    }
    CHECK(candidates > 0);
    // Bids that do capture three diagonals are infeasible.
    CHECK_FALSE(is_feasible(inst, constant_bids(4, 4, 1.0, 1.0)));
}

TEST_CASE("is_staircase on the named shapes") {
    CHECK(is_staircase({{0, 0}, {0, 1}, {1, 0}}, 2, 2));
    CHECK_FALSE(is_staircase({{0, 0}, {1, 1}}, 2, 2));
    std::vector<Cell> full;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) full.push_back({i, j});
    }
    CHECK(is_staircase(full, 3, 3));
    CHECK(is_staircase({}, 3, 3));
}

TEST_CASE("canonicalize_staircase produces prefix form") {
    const Staircase a = canonicalize_staircase({{0, 0}, {0, 1}, {1, 0}}, 2, 2);
    CHECK(a.row_order == std::vector<int>{0, 1});
    CHECK(a.heights == std::vector<int>{2, 1});

    const Staircase empty = canonicalize_staircase({}, 2, 3);
    CHECK(empty.heights == std::vector<int>{0, 0, 0});
    CHECK(empty.empty());

    const std::vector<Cell> cells{{2, 0}, {1, 0}, {2, 1}};
    const Staircase b = canonicalize_staircase(cells, 3, 3);
    CHECK(b.heights == std::vector<int>{2, 1, 0});
    CHECK(b.row_order[0] == 2); // bottom row sits in the most columns
    CHECK(b.row_order[1] == 1);
    std::vector<Cell> expanded = b.cells();
    std::vector<Cell> want(cells);
    std::sort(want.begin(), want.end());
    CHECK(expanded == want);

    CHECK_THROWS_AS(canonicalize_staircase({{0, 0}, {1, 1}}, 2, 2), NotAStaircase);
}

TEST_CASE("capture grows when all row multipliers scale up") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        MultiplicativeGenOptions opt;
        opt.m = uniform_int(rng, 1, 6);
        opt.n = uniform_int(rng, 1, 6);
        opt.seed = rng();
        opt.price_noise = 0.4;
        opt.value_mode = ValueMode::kRandom;
        const Instance inst = gen_multiplicative(opt);
        BidAssignment bids;
        for (int i = 0; i < opt.m; ++i) {
            bids.row_multipliers.push_back(std::exp(uniform_in(rng, -2, 2)));
        }
        for (int j = 0; j < opt.n; ++j) {
            bids.col_multipliers.push_back(std::exp(uniform_in(rng, -2, 2)));
        }
        const CaptureSet before = capture(inst, bids);
        const double lambda = 1.0 + uniform01(rng) * 3.0;
        for (double &r : bids.row_multipliers) r *= lambda;
        const CaptureSet after = capture(inst, bids);
        CHECK(std::includes(after.cells.begin(), after.cells.end(), before.cells.begin(),
                            before.cells.end()));
    }
}

TEST_CASE("equal price products force one cross cell (pair property)") {
    const Instance inst = gen_diagonal_hard(4);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        BidAssignment bids;
        for (int i = 0; i < 4; ++i) bids.row_multipliers.push_back(uniform_in(rng, 0.0, 2.0));
        for (int j = 0; j < 4; ++j) bids.col_multipliers.push_back(uniform_in(rng, 0.0, 2.0));
        const CaptureSet cap = capture(inst, bids);
        auto captured = [&](int i, int j) {
            return std::binary_search(cap.cells.begin(), cap.cells.end(), Cell{i, j});
        };
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                if (captured(i, i) && captured(j, j)) {
                    CHECK((captured(i, j) || captured(j, i)));
                }
            }
        }
    }
}

TEST_CASE("multiplicative prices only ever capture staircases") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        MultiplicativeGenOptions opt;
        opt.m = uniform_int(rng, 1, 7);
        opt.n = uniform_int(rng, 1, 7);
        opt.seed = rng();
        const Instance inst = gen_multiplicative(opt);
        BidAssignment bids;
        for (int i = 0; i < opt.m; ++i) {
            bids.row_multipliers.push_back(rng() % 4 == 0 ? 0.0
                                                          : std::exp(uniform_in(rng, -3, 3)));
        }
        for (int j = 0; j < opt.n; ++j) {
            bids.col_multipliers.push_back(rng() % 4 == 0 ? 0.0
                                                          : std::exp(uniform_in(rng, -3, 3)));
        }
        const CaptureSet cap = capture(inst, bids);
        CHECK(is_staircase(cap.cells, opt.m, opt.n));
    }
}

TEST_CASE("canonicalize then expand is the identity on staircases") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = uniform_int(rng, 1, 8);
        const int n = uniform_int(rng, 1, 8);
        const Staircase s = random_staircase(m, n, rng);
        const std::vector<Cell> cells = s.cells();
        CHECK(is_staircase(cells, m, n));
        const Staircase canon = canonicalize_staircase(cells, m, n);
        CHECK(canon.cells() == cells);
    }
}

TEST_CASE("instance JSON round-trips") {
    MultiplicativeGenOptions opt;
    opt.m = 3;
    opt.n = 4;
    opt.seed = 5;
    const Instance inst = gen_multiplicative(opt);
    const Instance back = instance_from_json(to_json(inst));
    CHECK(back.rows() == inst.rows());
    CHECK(back.cols() == inst.cols());
    CHECK(back.budget() == inst.budget());
    CHECK(back.prices() == inst.prices());
    CHECK(back.values() == inst.values());
    REQUIRE(back.factorization().has_value());
    CHECK(back.factorization()->rows == inst.factorization()->rows);

    // factorization stays optional in the schema
    nlohmann::json j = to_json(inst);
    j.erase("factorization");
    CHECK_FALSE(instance_from_json(j).factorization().has_value());
}
