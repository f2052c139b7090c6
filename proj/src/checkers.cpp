#include "lrh/checkers.hpp"

#include <algorithm>
#include <sstream>

#include "lrh/errors.hpp"

namespace lrh {

int BlackConfig::row_of_column(int c) const {
    for (int a = 1; a <= n(); ++a)
        if (col_of_row[a] == c) return a;
    throw InvariantViolation("black configuration is not a permutation");
}

BlackConfig BlackConfig::antidiagonal(int n) {
    BlackConfig b;
    b.col_of_row.assign(n + 1, 0);
    for (int a = 1; a <= n; ++a) b.col_of_row[a] = n + 1 - a;
    return b;
}

BlackConfig BlackConfig::diagonal(int n) {
    BlackConfig b;
    b.col_of_row.assign(n + 1, 0);
    for (int a = 1; a <= n; ++a) b.col_of_row[a] = a;
    return b;
}

void validate(const Checkerboard& board) {
    int n = board.n();
    std::vector<bool> seen(n + 1, false);
    for (int a = 1; a <= n; ++a) {
        int c = board.black.col(a);
        if (c < 1 || c > n || seen[c]) throw InvariantViolation("black checkers do not form a permutation");
        seen[c] = true;
    }
    for (std::size_t j = 0; j < board.red.size(); ++j) {
        const Red& x = board.red[j];
        if (x.row < 1 || x.row > n || x.col < 1 || x.col > n) throw InvariantViolation("red checker off the board");
        if (j > 0 && board.red[j - 1].col >= x.col) throw InvariantViolation("red checkers not in southwest-to-northeast order");
        for (std::size_t i = 0; i < j; ++i)
            if (board.red[i].row == x.row) throw InvariantViolation("two red checkers share a row");
        bool ambient = false;
        for (int a = 1; a <= x.row; ++a)
            if (board.black.col(a) <= x.col) ambient = true;
        if (!ambient) throw InvariantViolation("red checker without a black checker to its northwest");
    }
}

std::vector<std::vector<int>> dimension_array(const BlackConfig& black) {
    int n = black.n();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            int cnt = 0;
            for (int x = 1; x <= a; ++x)
                if (black.col(x) <= b) ++cnt;
            d[a - 1][b - 1] = cnt;
        }
    return d;
}

std::vector<int> sort_schedule(int n) {
    std::vector<int> s;
    for (int i = n - 1; i >= 1; --i)
        for (int j = i; j <= n - 1; ++j) s.push_back(j);
    return s;
}

Checkerboard initial_board(const Bracket& omega, const Bracket& tau) {
    if (omega.n != tau.n || omega.k != tau.k) throw InputError("brackets must share the ambient (n,k)");
    int n = omega.n, k = omega.k;
    Checkerboard b;
    b.black = BlackConfig::antidiagonal(n);
    for (int j = 1; j <= k; ++j) {
        int row = tau[k - j], col = omega[j - 1];
        if (col + row < n + 1)
            throw EmptyIntersection(omega.str() + " and " + tau.str() + " impose disjoint conditions");
        b.red.push_back({row, col});
    }
    b.stage = 0;
    return b;
}

std::string StageCase::name() const {
    static const char* q2n[] = {"alpha", "beta", "gamma"};
    std::string s = "(";
    s += q1 == Q1::a ? 'a' : q1 == Q1::b ? 'b' : 'c';
    s += ',';
    s += q2n[static_cast<int>(q2)];
    s += ')';
    return s;
}

StageCase classify_stage(const Checkerboard& board, int r) {
    int n = board.n();
    if (r < 1 || r >= n) throw UnlinkedStages("critical row out of range");
    StageCase sc;
    sc.r = r;
    sc.desc_col = board.black.col(r);
    sc.rise_col = board.black.col(r + 1);
    if (sc.rise_col >= sc.desc_col) throw UnlinkedStages("rows are already sorted at this stage");
    // Critical diagonal: squares (r+1+m, rise_col+m), all occupied by sorted black checkers.
    int best_row = n + 1;
    for (std::size_t j = 0; j < board.red.size(); ++j) {
        const Red& x = board.red[j];
        if (x.row > r && x.row - (r + 1) == x.col - sc.rise_col && x.row < best_row) {
            best_row = x.row;
            sc.diag_red = static_cast<int>(j);
        }
        if (x.row == r) sc.row_red = static_cast<int>(j);
    }
    if (sc.diag_red < 0)
        sc.q1 = Q1::c;
    else
        sc.q1 = board.red[sc.diag_red].row == r + 1 ? Q1::a : Q1::b;
    if (sc.row_red < 0)
        sc.q2 = Q2::gamma;
    else
        sc.q2 = board.red[sc.row_red].col == sc.desc_col ? Q2::alpha : Q2::beta;
    if (sc.q1 == Q1::b && sc.q2 == Q2::beta) {
        const Red& top = board.red[sc.diag_red];
        const Red& jr = board.red[sc.row_red];
        for (const Red& x : board.red)
            if (x.row > r && x.row < top.row && x.col > top.col && x.col < jr.col) sc.blocker = true;
    }
    return sc;
}

std::vector<Red> canonical_reds(const BlackConfig& black, std::vector<Red> reds) {
    for (Red& x : reds) {
        int row = 0, col = 0;
        for (int a = 1; a <= x.row; ++a)
            if (black.col(a) <= x.col) {
                row = a;
                col = std::max(col, black.col(a));
            }
        if (row == 0) throw InvariantViolation("red checker lost its ambient space");
        x = {row, col};
    }
    std::sort(reds.begin(), reds.end(), [](const Red& a, const Red& b) { return a.col < b.col; });
    return reds;
}

std::vector<Move> move_red(const Checkerboard& board, int r) {
    StageCase sc = classify_stage(board, r);
    Checkerboard next;
    next.black = board.black;
    std::swap(next.black.col_of_row[r], next.black.col_of_row[r + 1]);
    next.stage = board.stage + 1;
    const int cd = sc.desc_col, ca = sc.rise_col;

    std::vector<Red> rest;
    for (std::size_t j = 0; j < board.red.size(); ++j)
        if (static_cast<int>(j) != sc.row_red && static_cast<int>(j) != sc.diag_red) rest.push_back(board.red[j]);
    auto with = [&](std::initializer_list<Red> extra) {
        std::vector<Red> v = rest;
        v.insert(v.end(), extra);
        return v;
    };

    std::vector<std::pair<std::vector<Red>, Successor>> outs;
    const Red* jr = sc.row_red >= 0 ? &board.red[sc.row_red] : nullptr;
    const Red* top = sc.diag_red >= 0 ? &board.red[sc.diag_red] : nullptr;
    switch (sc.q1) {
        case Q1::a:
            if (sc.q2 == Q2::alpha)
                outs.push_back({with({{r + 1, cd}, {r, ca}}), Successor::Only});
            else if (sc.q2 == Q2::beta)
                outs.push_back({with({{r + 1, jr->col}, {r, ca}}), Successor::Only});
            else
                outs.push_back({with({{r, ca}}), Successor::Only});
            break;
        case Q1::b:
            if (sc.q2 == Q2::alpha) {
                outs.push_back({with({{top->row, cd}, {r, ca}}), Successor::Swap});
            } else if (sc.q2 == Q2::beta) {
                outs.push_back({board.red, Successor::Stay});
                if (!sc.blocker) outs.push_back({with({{top->row, jr->col}, {r, ca}}), Successor::Swap});
            } else {
                outs.push_back({board.red, Successor::Only});
            }
            break;
        case Q1::c:
            if (sc.q2 == Q2::alpha)
                outs.push_back({with({{r, ca}}), Successor::Stay});
            else if (sc.q2 == Q2::beta)
                outs.push_back({board.red, Successor::Stay});
            else
                outs.push_back({board.red, Successor::Only});
            break;
    }

    std::vector<Move> result;
    for (auto& [reds, kind] : outs) {
        next.red = canonical_reds(next.black, reds);
        validate(next);
        result.push_back({next, kind});
    }
    return result;
}

Bracket GameTree::leaf_bracket(int node) const {
    const Checkerboard& b = nodes[node].board;
    std::vector<int> e;
    for (const Red& x : b.red) {
        if (x.row != x.col) throw InvariantViolation("leaf red checker off the diagonal");
        e.push_back(x.col);
    }
    std::sort(e.begin(), e.end());
    return Bracket(b.n(), e);
}

GameTree game_tree(const Bracket& omega, const Bracket& tau) {
    GameTree tree{omega, tau, {}, {}, {}};
    Checkerboard root = initial_board(omega, tau);
    validate(root);
    tree.nodes.push_back({root, -1, Successor::Only, {}, {}});
    std::vector<int> frontier{0};
    for (int r : sort_schedule(omega.n)) {
        std::vector<int> next_frontier;
        for (int id : frontier) {
            tree.nodes[id].stage_case = classify_stage(tree.nodes[id].board, r);
            auto moves = move_red(tree.nodes[id].board, r);
            for (auto& mv : moves) {
                int cid = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back({std::move(mv.board), id, mv.kind, {}, {}});
                tree.nodes[id].children.push_back(cid);
                next_frontier.push_back(cid);
            }
        }
        frontier = std::move(next_frontier);
    }
    tree.leaves = frontier;
    for (int id : tree.leaves) ++tree.multiplicities[tree.leaf_bracket(id)];
    return tree;
}

std::map<Bracket, std::int64_t> game_multiplicities(const Bracket& omega, const Bracket& tau) {
    Checkerboard root = initial_board(omega, tau);
    std::map<std::vector<Red>, std::int64_t> boards{{root.red, 1}};
    BlackConfig black = root.black;
    for (int r : sort_schedule(omega.n)) {
        std::map<std::vector<Red>, std::int64_t> next;
        BlackConfig nb;
        for (auto& [reds, m] : boards) {
            Checkerboard b{black, reds, 0};
            for (auto& mv : move_red(b, r)) {
                next[mv.board.red] += m;
                nb = mv.board.black;
            }
        }
        black = nb;
        boards = std::move(next);
    }
    std::map<Bracket, std::int64_t> out;
    for (auto& [reds, m] : boards) {
        std::vector<int> e;
        for (const Red& x : reds) {
            if (x.row != x.col) throw InvariantViolation("leaf red checker off the diagonal");
            e.push_back(x.col);
        }
        std::sort(e.begin(), e.end());
        out[Bracket(omega.n, e)] += m;
    }
    return out;
}

std::string render_board(const Checkerboard& board) {
    int n = board.n();
    std::ostringstream os;
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            bool blk = board.black.col(a) == b;
            bool red = std::any_of(board.red.begin(), board.red.end(), [&](const Red& x) { return x.row == a && x.col == b; });
            os << (red ? (blk ? 'R' : 'r') : (blk ? 'B' : '.'));
            if (b < n) os << ' ';
        }
        os << '\n';
    }
    return os.str();
}

std::string render_game(const GameTree& tree) {
    std::ostringstream os;
    os << "game " << tree.omega.str() << " x " << tree.tau.str() << "\n";
    // Depth-first, children indented below their parent.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const GameNode& nd = tree.nodes[id];
        std::string pad(2 * depth, ' ');
        os << pad << "stage " << nd.board.stage;
        if (nd.kind == Successor::Stay) os << " (stay)";
        if (nd.kind == Successor::Swap) os << " (swap)";
        if (!nd.children.empty()) os << "  move " << nd.stage_case.name() << (nd.stage_case.blocker ? " blocked" : "");
        else os << "  leaf " << tree.leaf_bracket(id).str();
        os << "\n";
        std::istringstream rows(render_board(nd.board));
        for (std::string line; std::getline(rows, line);) os << pad << "  " << line << "\n";
        // Collapse long chains of single moves into one indentation level.
        int child_depth = nd.children.size() > 1 ? depth + 1 : depth;
        for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it) stack.push_back({*it, child_depth});
    }
    os << "leaves:";
    for (auto& [b, m] : tree.multiplicities) os << " " << m << b.str();
    os << "\n";
    return os.str();
}

}  // namespace lrh
