#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrh/combinatorics.hpp"

namespace lrh {

// Rows index the moving flag (row a <-> M_a), columns the fixed flag (column b <-> F_b).
struct BlackConfig {
    std::vector<int> col_of_row;  // 1-based, entry 0 unused

    int n() const { return static_cast<int>(col_of_row.size()) - 1; }
    int col(int row) const { return col_of_row[row]; }
    int row_of_column(int c) const;

    static BlackConfig antidiagonal(int n);
    static BlackConfig diagonal(int n);
    bool operator==(const BlackConfig&) const = default;
};

struct Red {
    int row = 0;
    int col = 0;
    auto operator<=>(const Red&) const = default;
};

struct Checkerboard {
    BlackConfig black;
    std::vector<Red> red;  // southwest to northeast, i.e. by increasing column
    int stage = 0;

    int n() const { return black.n(); }
    int k() const { return static_cast<int>(red.size()); }
    bool operator==(const Checkerboard&) const = default;
};

// Throws InvariantViolation when the board breaks a checkerboard invariant.
void validate(const Checkerboard& board);

std::vector<std::vector<int>> dimension_array(const BlackConfig& black);

std::vector<int> sort_schedule(int n);

Checkerboard initial_board(const Bracket& omega, const Bracket& tau);

enum class Q1 { a, b, c };                 // top red of the critical diagonal: on rising checker / elsewhere / none
enum class Q2 { alpha, beta, gamma };      // red of the critical row: on descending checker / elsewhere / none

struct StageCase {
    Q1 q1 = Q1::c;
    Q2 q2 = Q2::gamma;
    bool blocker = false;
    int r = 0;
    int desc_col = 0;       // column of the black checker in row r (moves down)
    int rise_col = 0;       // column of the black checker in row r+1 (moves up)
    int row_red = -1;       // index into board.red of the critical-row red
    int diag_red = -1;      // index into board.red of the top critical-diagonal red
    std::string name() const;  // e.g. "(b,beta)"
};

StageCase classify_stage(const Checkerboard& board, int r);

enum class Successor { Only, Stay, Swap };

struct Move {
    Checkerboard board;
    Successor kind = Successor::Only;
};

std::vector<Move> move_red(const Checkerboard& board, int r);

// Moves every red to the canonical square of its ambient span: the lowest black row
// weakly northwest of it, in the rightmost such black column.
std::vector<Red> canonical_reds(const BlackConfig& black, std::vector<Red> reds);

struct GameNode {
    Checkerboard board;
    int parent = -1;
    Successor kind = Successor::Only;  // how this node was reached from its parent
    StageCase stage_case;              // classification of the move out of this node
    std::vector<int> children;
};

struct GameTree {
    Bracket omega, tau;
    std::vector<GameNode> nodes;  // nodes[0] is the root
    std::vector<int> leaves;
    std::map<Bracket, std::int64_t> multiplicities;

    Bracket leaf_bracket(int node) const;
};

GameTree game_tree(const Bracket& omega, const Bracket& tau);

// Only the leaf multiset, without materializing the tree.
std::map<Bracket, std::int64_t> game_multiplicities(const Bracket& omega, const Bracket& tau);

std::string render_board(const Checkerboard& board);
std::string render_game(const GameTree& tree);

}  // namespace lrh
