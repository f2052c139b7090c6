#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrh/errors.hpp"
#include "lrh/flags.hpp"
#include "lrh/solver.hpp"
#include "lrh/verify.hpp"

using namespace lrh;

namespace {

CMat gaussian(int r, int c, Rng& rng) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.gaussian();
    return m;
}

// A k-plane in the Schubert cell of b relative to the flag f: column j in span f_1..f_{b_j},
// with a generic component along f_{b_j}.
CMat cell_point(const Bracket& b, const CMat& f, Rng& rng) {
    CMat y = CMat::Zero(f.rows(), b.k);
    for (int j = 0; j < b.k; ++j) y.col(j) = f.leftCols(b.e[j]) * gaussian(b.e[j], 1, rng);
    return y;
}

}  // namespace

TEST_CASE("points on the variety pass, generic points fail") {
    Rng rng(1);
    Bracket b(7, {2, 4, 7});
    CMat f = random_flag(7, 3).basis;
    for (int trial = 0; trial < 10; ++trial) {
        auto ok = check_solution(cell_point(b, f, rng), {b}, {f});
        CHECK(ok.pass);
        CHECK(ok.max_ratio < 1e-10);
        auto bad = check_solution(gaussian(7, 3, rng), {b}, {f});
        CHECK_FALSE(bad.pass);
        CHECK(bad.max_ratio > 1e-4);
    }
    // The last entry 7 imposes nothing and is reported with ratio 0.
    auto rep = check_solution(gaussian(7, 3, rng), {b}, {f});
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.entries[0].required_rank == 3 + 2 - 1);
    CHECK(rep.entries[1].required_rank == 3 + 4 - 2);
    CHECK(rep.entries[2].ratio == 0.0);
    CHECK(rep.entries[2].pass);
}

TEST_CASE("residuals do not depend on the basis of the plane or the flag scaling") {
    Rng rng(2);
    Bracket b(6, {2, 4, 6}), c(6, {1, 4, 6});
    CMat f = random_flag(6, 5).basis, g = random_flag(6, 6).basis;
    for (int trial = 0; trial < 10; ++trial) {
        CMat y = cell_point(b, f, rng) + 1e-5 * gaussian(6, 3, rng);
        auto r0 = check_solution(y, {b, c}, {f, g});
        CMat a = gaussian(3, 3, rng);
        auto r1 = check_solution(y * a, {b, c}, {f, g});
        CMat d = CMat::Identity(6, 6);
        for (int i = 0; i < 6; ++i) d(i, i) = rng.gaussian();
        auto r2 = check_solution(y, {b, c}, {f * d, g});
        REQUIRE(r0.entries.size() == r1.entries.size());
        for (std::size_t i = 0; i < r0.entries.size(); ++i) {
            CHECK(std::abs(r0.entries[i].ratio - r1.entries[i].ratio) < 1e-12);
            CHECK(std::abs(r0.entries[i].ratio - r2.entries[i].ratio) < 1e-12);
        }
    }
}

TEST_CASE("distinctness") {
    Rng rng(3);
    CMat a = gaussian(5, 2, rng), b = gaussian(5, 2, rng);
    auto d = distinctness({a, b, a * gaussian(2, 2, rng)});
    REQUIRE(d.collisions.size() == 1);
    CHECK(d.collisions[0] == std::make_pair(0, 2));
    CHECK(d.min_distance < 1e-10);
    auto e = distinctness({a, b});
    CHECK(e.collisions.empty());
    CHECK(e.min_distance > 1e-6);
    CHECK(distinctness({a}).min_distance == -1.0);
}

TEST_CASE("oracle counts") {
    CHECK(oracle_count(parse_problem("[2 4]^4", 4, 2).expanded()) == 2);
    CHECK(oracle_count(parse_problem("[2 4 6]^3", 6, 3).expanded()) == 2);
    CHECK(oracle_count(parse_problem("[4 6 7]^12", 7, 3).expanded()) == 462);
    CHECK(oracle_count(parse_problem("[2 4 6 8]^2 [2 5 7 8]", 8, 4).expanded()) == 3);
    CHECK(oracle_count(parse_problem("[2 4 6] [2 5 6]^3", 6, 3).expanded()) == 2);
    Bracket w(7, {1, 4, 6});
    CHECK(oracle_count({w, dual(w)}) == 1);
    CHECK(oracle_count({w, w}) == (dual(w) == w ? 1 : 0));
    CHECK_THROWS_AS(oracle_count({Bracket(9, {8, 9}), Bracket(9, {8, 9})}), OracleTooLarge);
}

TEST_CASE("oracle count agrees with the poset") {
    Rng rng(4);
    int checked = 0;
    for (int n = 3; n <= 6; ++n)
        for (int k = 1; k < n; ++k) {
            auto all = all_brackets(n, k);
            for (int trial = 0; trial < 40; ++trial) {
                // Random complete problem.
                std::vector<Bracket> conds;
                int left = k * (n - k);
                for (int guard = 0; left > 0 && guard < 200; ++guard) {
                    const Bracket& b = all[static_cast<std::size_t>(rng.uniform() * all.size())];
                    int c = codim(b);
                    if (c == 0 || c > left) continue;
                    conds.push_back(b);
                    left -= c;
                }
                if (left != 0 || conds.size() < 2) continue;
                SchubertProblem p;
                p.n = n;
                p.k = k;
                for (const auto& b : conds) p.conditions.push_back({b, 1});
                std::int64_t expect = oracle_count(conds);
                if (expect == 0) {
                    CHECK_THROWS_AS(build_poset(p), InfeasibleProblem);
                } else {
                    CHECK(build_poset(p).count() == expect);
                }
                CHECK(count_check(p, expect).pass);
                ++checked;
            }
        }
    CHECK(checked > 100);
}
