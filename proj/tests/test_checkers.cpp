#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrh/checkers.hpp"
#include "lrh/errors.hpp"

using namespace lrh;

namespace {

BlackConfig from_cols(std::vector<int> cols) {
    BlackConfig b;
    b.col_of_row = {0};
    b.col_of_row.insert(b.col_of_row.end(), cols.begin(), cols.end());
    return b;
}

// Replays the game's first `stages` moves, always taking the first successor.
Checkerboard advance(Checkerboard b, int stages, Successor prefer = Successor::Only) {
    auto sched = sort_schedule(b.n());
    for (int s = 0; s < stages; ++s) {
        auto mv = move_red(b, sched[s]);
        b = mv.front().board;
        for (auto& m : mv)
            if (m.kind == prefer) b = m.board;
    }
    return b;
}

}  // namespace

TEST_CASE("dimension array of a five-checker configuration") {
    // Checkers at (M1,F5), (M2,F1), (M3,F4), (M4,F2), (M5,F3).
    auto d = dimension_array(from_cols({5, 1, 4, 2, 3}));
    std::vector<std::vector<int>> expect = {
        {0, 0, 0, 0, 1}, {1, 1, 1, 1, 2}, {1, 1, 1, 2, 3}, {1, 2, 2, 3, 4}, {1, 2, 3, 4, 5}};
    CHECK(d == expect);
    CHECK(d[3][1] == 2);
    CHECK(d[0][4] == 1);
}

TEST_CASE("dimension arrays of extreme configurations") {
    for (int n = 2; n <= 7; ++n) {
        auto anti = dimension_array(BlackConfig::antidiagonal(n));
        auto diag = dimension_array(BlackConfig::diagonal(n));
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                CHECK(anti[a - 1][b - 1] == std::max(0, a + b - n));
                CHECK(diag[a - 1][b - 1] == std::min(a, b));
            }
    }
}

TEST_CASE("dimension array steps are monotone and unit") {
    auto d = dimension_array(from_cols({3, 6, 1, 5, 2, 4}));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            if (a) CHECK((d[a][b] - d[a - 1][b] == 0 || d[a][b] - d[a - 1][b] == 1));
            if (b) CHECK((d[a][b] - d[a][b - 1] == 0 || d[a][b] - d[a][b - 1] == 1));
        }
    CHECK(d[5][5] == 6);
}

TEST_CASE("sort schedule") {
    CHECK(sort_schedule(2) == std::vector<int>{1});
    CHECK(sort_schedule(3) == std::vector<int>{2, 1, 2});
    CHECK(sort_schedule(4) == std::vector<int>{3, 2, 3, 1, 2, 3});
    for (int n = 2; n <= 9; ++n) {
        BlackConfig b = BlackConfig::antidiagonal(n);
        auto s = sort_schedule(n);
        CHECK(s.size() == static_cast<std::size_t>(n * (n - 1) / 2));
        for (int r : s) {
            CHECK(b.col(r) > b.col(r + 1));  // every step is a genuine descent
            std::swap(b.col_of_row[r], b.col_of_row[r + 1]);
        }
        CHECK(b == BlackConfig::diagonal(n));
    }
}

TEST_CASE("initial boards") {
    auto b = initial_board(Bracket(4, {2, 4}), Bracket(4, {2, 4}));
    REQUIRE(b.red.size() == 2);
    CHECK(b.red[0] == Red{4, 2});
    CHECK(b.red[1] == Red{2, 4});
    auto c = initial_board(Bracket(6, {2, 4, 6}), Bracket(6, {1, 3, 5}));
    CHECK(c.red == std::vector<Red>{{5, 2}, {3, 4}, {1, 6}});
    auto d = initial_board(bottom_bracket(7, 3), identity_bracket(7, 3));
    CHECK(d.red == std::vector<Red>{{7, 1}, {6, 2}, {5, 3}});
    CHECK_THROWS_AS(initial_board(Bracket(4, {1, 2}), Bracket(4, {1, 3})), EmptyIntersection);
}

TEST_CASE("four-lines game: classifications along the way") {
    Bracket b24(4, {2, 4});
    Checkerboard b0 = initial_board(b24, b24);
    CHECK(classify_stage(b0, 3).name() == "(c,gamma)");
    auto m0 = move_red(b0, 3);
    REQUIRE(m0.size() == 1);
    CHECK(m0[0].board.red == b0.red);  // (c,gamma) leaves reds in place

    Checkerboard b1 = m0[0].board;
    StageCase sc = classify_stage(b1, 2);
    CHECK(sc.q1 == Q1::b);
    CHECK(sc.q2 == Q2::beta);
    CHECK_FALSE(sc.blocker);
    auto m1 = move_red(b1, 2);
    REQUIRE(m1.size() == 2);
    CHECK(m1[0].kind == Successor::Stay);
    CHECK(m1[1].kind == Successor::Swap);
}

TEST_CASE("a blocker suppresses the swap") {
    // Critical row 2; descending checker at (2,7), rising at (3,1); diagonal (3,1),(4,2),...
    // Red on the diagonal at (6,4), red in the critical row at (2,8), blocker at (4,6).
    Checkerboard b;
    b.black = from_cols({8, 7, 1, 2, 3, 4, 5, 6});
    b.red = {{6, 4}, {4, 6}, {2, 8}};
    validate(b);
    StageCase sc = classify_stage(b, 2);
    CHECK(sc.q1 == Q1::b);
    CHECK(sc.q2 == Q2::beta);
    CHECK(sc.blocker);
    CHECK(move_red(b, 2).size() == 1);
    b.red = {{6, 4}, {2, 8}};
    CHECK_FALSE(classify_stage(b, 2).blocker);
    CHECK(move_red(b, 2).size() == 2);
}

TEST_CASE("game trees of reference pairs") {
    Bracket b246(6, {2, 4, 6});
    auto t = game_tree(b246, b246);
    std::map<Bracket, std::int64_t> expect{{Bracket(6, {2, 3, 4}), 1}, {Bracket(6, {1, 3, 5}), 2}, {Bracket(6, {1, 2, 6}), 1}};
    CHECK(t.multiplicities == expect);
    Bracket b24(4, {2, 4});
    std::map<Bracket, std::int64_t> four{{Bracket(4, {1, 4}), 1}, {Bracket(4, {2, 3}), 1}};
    CHECK(game_tree(b24, b24).multiplicities == four);
    for (const auto& w : all_brackets(6, 3)) {
        auto g = game_tree(w, dual(w));
        REQUIRE(g.multiplicities.size() == 1);
        CHECK(g.multiplicities.begin()->first == bottom_bracket(6, 3));
        CHECK(g.multiplicities.begin()->second == 1);
    }
}

TEST_CASE("game tree structure") {
    Bracket w(6, {2, 4, 6});
    auto t = game_tree(w, w);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        for (int c : t.nodes[i].children) {
            CHECK(t.nodes[c].board.stage == t.nodes[i].board.stage + 1);
            CHECK(t.nodes[c].parent == static_cast<int>(i));
        }
    }
    for (int leaf : t.leaves) CHECK(t.nodes[leaf].board.black == BlackConfig::diagonal(6));
    CHECK(game_multiplicities(w, w) == t.multiplicities);
}

TEST_CASE("game tree multiplicities equal the tableau oracle for n <= 6") {
    int pairs = 0;
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k < n; ++k) {
            auto bs = all_brackets(n, k);
            for (const auto& w : bs)
                for (const auto& t : bs) {
                    if (codim(w) + codim(t) > k * (n - k)) continue;
                    std::map<Bracket, std::int64_t> game;
                    try {
                        game = game_tree(w, t).multiplicities;
                    } catch (const EmptyIntersection&) {
                    }
                    CHECK(game == lr_product_oracle(w, t));
                    ++pairs;
                }
        }
    CHECK(pairs == 723);
}

TEST_CASE("every move keeps the board valid") {
    Bracket w(7, {2, 4, 7}), t(7, {3, 5, 7});
    auto tree = game_tree(w, t);
    for (auto& nd : tree.nodes) CHECK_NOTHROW(validate(nd.board));
}

TEST_CASE("board rendering") {
    auto b = initial_board(Bracket(4, {2, 4}), Bracket(4, {2, 4}));
    CHECK(render_board(b) == ". . . B\n. . B r\n. B . .\nB r . .\n");
    auto b1 = advance(b, 3, Successor::Swap);
    CHECK(b1.stage == 3);
}
