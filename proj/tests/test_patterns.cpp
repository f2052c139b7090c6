#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrh/errors.hpp"
#include "lrh/flags.hpp"
#include "lrh/patterns.hpp"

using namespace lrh;

namespace {

CVec random_point(int d, Rng& rng) {
    CVec x(d);
    for (int v = 0; v < d; ++v) x(v) = rng.gaussian();
    return x;
}

// Basis change used by the generalizing step at time t in the pattern's row basis:
// column r becomes c m_r + t m_{r+1}, column r+1 becomes m_r.
CMat step_basis(int n, int r, double t, cplx gamma) {
    CMat g = CMat::Identity(n, n);
    g(r - 1, r - 1) = 1.0 - t + gamma * t;
    g(r, r - 1) = t;
    g(r - 1, r) = 1.0;
    g(r, r) = 0.0;
    return g;
}

Checkerboard four_lines_board(int stage) {
    Bracket b(4, {2, 4});
    auto tree = game_tree(b, b);
    for (const auto& node : tree.nodes)
        if (node.board.stage == stage) return node.board;
    throw std::logic_error("missing stage");
}

}  // namespace

TEST_CASE("initial pattern of the four-lines problem") {
    auto p = pattern_from_board(four_lines_board(0));
    CHECK(render_pattern(p) == "x_{1,1}  ·\n1        ·\n·        x_{3,2}\n·        1\n");
    CHECK(p.var_count() == 2);
    CHECK(p.pivot == std::vector<int>{2, 4});
}

TEST_CASE("pattern dimension equals the dimension of the checkerboard variety") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k < n; ++k)
            for (const auto& w : all_brackets(n, k))
                for (const auto& t : all_brackets(n, k)) {
                    if (codim(w) + codim(t) > k * (n - k)) continue;
                    GameTree tree;
                    try {
                        tree = game_tree(w, t);
                    } catch (const EmptyIntersection&) {
                        continue;
                    }
                    int root_dim = k * (n - k) - codim(w) - codim(t);
                    CHECK(pattern_from_board(tree.nodes[0].board).var_count() == root_dim);
                    for (int leaf : tree.leaves) {
                        auto p = pattern_from_board(tree.nodes[leaf].board);
                        CHECK(p.var_count() == k * (n - k) - codim(tree.leaf_bracket(leaf)));
                        CHECK(p.var_count() == root_dim);
                    }
                }
}

TEST_CASE("fit_pattern inverts instantiate under any change of column basis") {
    Rng rng(11);
    auto tree = game_tree(Bracket(7, {2, 4, 7}), Bracket(7, {3, 5, 7}));
    for (const auto& node : tree.nodes) {
        auto p = pattern_from_board(node.board);
        CVec x = random_point(p.var_count(), rng);
        CMat g = random_unit_circle_matrix(p.k, p.k, rng);
        CVec y = fit_pattern(instantiate(p, x) * g, p);
        CHECK((y - x).norm() <= 1e-10 * (1.0 + x.norm()));
    }
}

TEST_CASE("fit_pattern rejects planes outside the chart") {
    auto p = pattern_from_board(four_lines_board(0));
    CMat off = CMat::Zero(4, 2);
    off(0, 0) = 1.0;  // column 1 has no component on its pivot row
    off(3, 1) = 1.0;
    CHECK_THROWS_AS(fit_pattern(off, p), PatternMismatch);
    CMat bad = instantiate(p, CVec::Constant(2, 0.5));
    bad(3, 0) = 1.0;  // a structural zero cannot be restored
    bad(2, 0) = 1.0;
    CHECK_THROWS_AS(fit_pattern(bad, p), PatternMismatch);
}

TEST_CASE("four-lines stage links") {
    auto b0 = four_lines_board(0);
    auto m0 = move_red(b0, 3);
    REQUIRE(m0.size() == 1);
    auto first = link_stages(b0, m0[0].board, m0[0].kind);
    CHECK(first.kind == LinkKind::Trivial);
    // Coordinate change x -> 1/(x-1) for gamma = 1.
    cplx x32(0.3, 0.7), x11(-1.2, 0.4);
    CVec x(2);
    x << x11, x32;
    CVec y = first.to_parent(instantiate(first.child, x), 1.0);
    CHECK(std::abs(y(0) - x11) < 1e-12);
    CHECK(std::abs(y(1) - 1.0 / (x32 - 1.0)) < 1e-12);

    auto b1 = m0[0].board;
    auto m1 = move_red(b1, 2);
    REQUIRE(m1.size() == 2);
    auto stay = link_stages(b1, m1[0].board, m1[0].kind);
    CHECK(stay.kind == LinkKind::StayHomotopy);
    auto swap = link_stages(b1, m1[1].board, m1[1].kind);
    REQUIRE(swap.kind == LinkKind::SwapHomotopy);
    CHECK(render_pattern(swap.child) == "·        x_{1,2}\n1        ·\n·        x_{3,2}\n·        1\n");

    // With gamma = 1 and no bend the swap family is [x12 t, x12; x32, 0; x32 t, x32; 0, 1].
    CVec c(2);
    c << cplx(0.2, -0.9), cplx(1.1, 0.3);
    auto fam = swap.family(1.0);
    for (double t : {0.0, 0.4, 1.0}) {
        CMat expect(4, 2);
        expect << c(0) * t, c(0), c(1), 0.0, c(1) * t, c(1), 0.0, 1.0;
        CHECK((fam.value(t, c) - expect).norm() < 1e-14);
    }
    CHECK_THROWS_AS(link_stages(b0, m1[0].board, m1[0].kind), UnlinkedStages);
}

TEST_CASE("family derivatives match finite differences") {
    Rng rng(5);
    auto b1 = four_lines_board(1);
    auto m1 = move_red(b1, 2);
    for (const auto& mv : m1) {
        auto link = link_stages(b1, mv.board, mv.kind);
        auto fam = link.family(rng.unit_circle(), rng.unit_circle());
        CVec x = random_point(fam.nvars, rng);
        double t = 0.37, h = 1e-6;
        CMat fd = (fam.value(t + h, x) - fam.value(t - h, x)) / (2 * h);
        CHECK((fd - fam.dt(t, x)).norm() < 1e-8);
        std::vector<CMat> d;
        fam.dx(t, x, d);
        auto cols = fam.columns_of_var();
        for (int v = 0; v < fam.nvars; ++v) {
            CVec e = CVec::Zero(fam.nvars);
            e(v) = h;
            CMat fdv = (fam.value(t, x + e) - fam.value(t, x - e)) / (2 * h);
            CHECK((fdv - d[v]).norm() < 1e-8);
            for (int j = 0; j < fam.k; ++j)
                if (std::find(cols[v].begin(), cols[v].end(), j) == cols[v].end()) CHECK(d[v].col(j).norm() == 0.0);
        }
    }
}

TEST_CASE("every transition links child and parent components for n <= 5") {
    Rng rng(2024);
    int tracked = 0, total = 0;
    for (int n = 2; n <= 5; ++n)
        for (int k = 1; k < n; ++k)
            for (const auto& w : all_brackets(n, k))
                for (const auto& tau : all_brackets(n, k)) {
                    if (codim(w) + codim(tau) > k * (n - k)) continue;
                    GameTree tree;
                    try {
                        tree = game_tree(w, tau);
                    } catch (const EmptyIntersection&) {
                        continue;
                    }
                    for (const auto& node : tree.nodes) {
                        if (node.parent < 0) continue;
                        const auto& par = tree.nodes[node.parent].board;
                        auto link = link_stages(par, node.board, node.kind);
                        ++total;
                        cplx gamma = rng.unit_circle();
                        auto fam = link.family(gamma, 0.0);
                        CVec x = random_point(fam.nvars, rng);
                        CMat y0 = fam.value(0.0, x);
                        CHECK_NOTHROW(fit_pattern(y0, link.child));
                        if (!link.tracked()) {
                            CHECK(fam.depends_on_t() == false);
                            CHECK_NOTHROW(link.to_parent(y0, gamma));
                            continue;
                        }
                        ++tracked;
                        for (double t : {0.37, 1.0}) {
                            CMat w_t = step_basis(n, link.r, t, gamma).inverse() * fam.value(t, x);
                            CHECK_NOTHROW(fit_pattern(w_t, link.parent));
                        }
                        CHECK_NOTHROW(link.to_parent(fam.value(1.0, x), gamma));
                    }
                }
    CHECK(tracked > 0);
    CHECK(total > tracked);
}
