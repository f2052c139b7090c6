#pragma once

#include <array>
#include <string>
#include <vector>

#include "lrh/checkers.hpp"
#include "lrh/linalg.hpp"

namespace lrh {

// n x k matrix of Zero / One / Var entries. Rows follow the moving-flag basis (row a <-> m_a),
// column j belongs to the red checker with the j-th smallest row.
struct LocalizationPattern {
    static constexpr int kZero = -2;
    static constexpr int kOne = -1;

    int n = 0, k = 0;
    std::vector<int> cell;                     // row-major; kZero, kOne or a variable index
    std::vector<int> pivot;                    // 1-based row of each column's One
    std::vector<std::pair<int, int>> var_pos;  // 1-based (row, column) of each variable
    Checkerboard board;

    int var_count() const { return static_cast<int>(var_pos.size()); }
    int at(int row, int col) const { return cell[(row - 1) * k + (col - 1)]; }  // 1-based
    bool same_layout(const LocalizationPattern& o) const { return n == o.n && k == o.k && cell == o.cell; }
    std::string var_name(int v) const;  // "x_{i,j}"
};

LocalizationPattern pattern_from_board(const Checkerboard& board);

CMat instantiate(const LocalizationPattern& p, const CVec& x);

// Column-reduces `numeric` (same column span) into the pattern and returns the variable values.
// Throws PatternMismatch if the span does not lie in the pattern's chart within `tol` (relative).
CVec fit_pattern(const CMat& numeric, const LocalizationPattern& target, double tol = 1e-8);

std::string render_pattern(const LocalizationPattern& p);

// Polynomial matrix Z(t, x): each entry is a sum of terms p(t) * x_a * x_b with deg p <= 2
// (a or b may be absent).
struct ParamTerm {
    std::array<cplx, 3> tpoly{};
    int a = -1, b = -1;
};

struct ParamMatrix {
    int n = 0, k = 0, nvars = 0;
    std::vector<std::vector<ParamTerm>> entry;  // row-major n*k

    static ParamMatrix from_pattern(const LocalizationPattern& p);
    std::vector<ParamTerm>& at(int i, int j) { return entry[i * k + j]; }  // 0-based
    const std::vector<ParamTerm>& at(int i, int j) const { return entry[i * k + j]; }
    bool depends_on_t() const;

    CMat value(double t, const CVec& x) const;
    CMat dt(double t, const CVec& x) const;
    // For each variable: derivative matrix, nonzero only in `cols[v]`.
    void dx(double t, const CVec& x, std::vector<CMat>& out) const;
    std::vector<std::vector<int>> columns_of_var() const;
};

enum class LinkKind { Trivial, Rename, StayHomotopy, SwapHomotopy };
const char* link_kind_name(LinkKind k);

// Coordinates linking a child board (specialized, game stage g+1) to its parent (game stage g).
// The family Z(t,x) is written in the child's moving-flag basis A; the parent's basis at time t
// is A * E(t) (see moving_flag_at). At t=0 Z spans the child's solution, at t=1 the parent's.
struct StageLink {
    LinkKind kind = LinkKind::Trivial;
    LocalizationPattern child, parent;
    StageCase stage_case;
    Successor successor = Successor::Only;
    int r = 0;
    int moving_col = -1;    // child column whose pivot sits in the critical row
    int partner_col = -1;   // swap only: child column of the red that dropped down

    bool tracked() const { return kind == LinkKind::StayHomotopy || kind == LinkKind::SwapHomotopy; }
    // c(t) = 1 + (gamma-1)t + delta t(1-t).
    ParamMatrix family(cplx gamma, cplx delta = 0.0) const;
    // Parent coordinates of a child point without tracking (constant geometry, or the t=1 end).
    CVec to_parent(const CMat& child_basis_plane, cplx gamma, double tol = 1e-8) const;
};

StageLink link_stages(const Checkerboard& parent, const Checkerboard& child, Successor successor);

}  // namespace lrh
