#include "lrh/patterns.hpp"

#include <algorithm>
#include <sstream>

#include "lrh/errors.hpp"

namespace lrh {

std::string LocalizationPattern::var_name(int v) const {
    return "x_{" + std::to_string(var_pos[v].first) + "," + std::to_string(var_pos[v].second) + "}";
}

LocalizationPattern pattern_from_board(const Checkerboard& board) {
    LocalizationPattern p;
    p.n = board.n();
    p.k = board.k();
    p.board = board;
    p.cell.assign(p.n * p.k, LocalizationPattern::kZero);
    std::vector<Red> reds = board.red;
    std::sort(reds.begin(), reds.end());
    for (int j = 0; j < p.k; ++j) {
        const Red& x = reds[j];
        p.pivot.push_back(x.row);
        p.cell[(x.row - 1) * p.k + j] = LocalizationPattern::kOne;
    }
    // Variables column by column, top to bottom.
    for (int j = 0; j < p.k; ++j) {
        const Red& x = reds[j];
        for (int i = 1; i < x.row; ++i) {
            if (board.black.col(i) > x.col) continue;
            bool taken = std::any_of(reds.begin(), reds.end(), [&](const Red& y) { return y.row == i && y.col <= x.col; });
            if (taken) continue;
            p.cell[(i - 1) * p.k + j] = p.var_count();
            p.var_pos.push_back({i, j + 1});
        }
    }
    return p;
}

CMat instantiate(const LocalizationPattern& p, const CVec& x) {
    if (x.size() != p.var_count()) throw InputError("variable assignment has the wrong length");
    CMat m = CMat::Zero(p.n, p.k);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.k; ++j) {
            int c = p.cell[i * p.k + j];
            if (c == LocalizationPattern::kOne) m(i, j) = 1.0;
            else if (c >= 0) m(i, j) = x(c);
        }
    return m;
}

CVec fit_pattern(const CMat& numeric, const LocalizationPattern& target, double tol) {
    const int n = target.n, k = target.k;
    if (numeric.rows() != n || numeric.cols() != k) throw PatternMismatch("matrix shape does not match the pattern");
    if (!numeric.allFinite()) throw PatternMismatch("matrix has non-finite entries");
    CMat q = orthonormal_basis(numeric);
    CVec x(target.var_count());
    for (int j = 0; j < k; ++j) {
        std::vector<int> zero_rows;
        for (int i = 0; i < n; ++i)
            if (target.cell[i * k + j] == LocalizationPattern::kZero) zero_rows.push_back(i);
        int rows = std::max<int>(static_cast<int>(zero_rows.size()), k);
        CMat m = CMat::Zero(rows, k);
        for (std::size_t a = 0; a < zero_rows.size(); ++a) m.row(a) = q.row(zero_rows[a]);
        Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s(k - 1) > tol) throw PatternMismatch("zero entries of column " + std::to_string(j + 1) + " cannot be met");
        if (k >= 2 && s(k - 2) <= tol) throw PatternMismatch("column " + std::to_string(j + 1) + " is not determined by the pattern");
        CVec v = svd.matrixV().col(k - 1);
        CVec col = q * v;
        cplx piv = col(target.pivot[j] - 1);
        if (std::abs(piv) <= tol) throw PatternMismatch("pivot of column " + std::to_string(j + 1) + " vanishes");
        col /= piv;
        for (int i = 0; i < n; ++i) {
            int c = target.cell[i * k + j];
            if (c >= 0) x(c) = col(i);
        }
    }
    return x;
}

std::string render_pattern(const LocalizationPattern& p) {
    std::vector<std::string> txt(p.n * p.k);
    std::size_t w = 1;
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.k; ++j) {
            int c = p.cell[i * p.k + j];
            std::string s = c == LocalizationPattern::kZero ? "·" : c == LocalizationPattern::kOne ? "1" : p.var_name(c);
            w = std::max(w, c >= 0 ? s.size() : std::size_t{1});
            txt[i * p.k + j] = s;
        }
    std::ostringstream os;
    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.k; ++j) {
            const std::string& s = txt[i * p.k + j];
            std::size_t len = p.cell[i * p.k + j] >= 0 ? s.size() : 1;
            os << s << std::string(w - len + (j + 1 < p.k ? 2 : 0), ' ');
        }
        // Trim the padding of the last column.
        std::string line = os.str();
        os.str("");
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    return os.str();
}

ParamMatrix ParamMatrix::from_pattern(const LocalizationPattern& p) {
    ParamMatrix z;
    z.n = p.n;
    z.k = p.k;
    z.nvars = p.var_count();
    z.entry.assign(p.n * p.k, {});
    for (int i = 0; i < p.n * p.k; ++i) {
        int c = p.cell[i];
        if (c == LocalizationPattern::kOne) z.entry[i].push_back({{1.0, 0.0, 0.0}, -1, -1});
        else if (c >= 0) z.entry[i].push_back({{1.0, 0.0, 0.0}, c, -1});
    }
    return z;
}

bool ParamMatrix::depends_on_t() const {
    for (const auto& e : entry)
        for (const auto& term : e)
            if (term.tpoly[1] != 0.0 || term.tpoly[2] != 0.0) return true;
    return false;
}

namespace {

inline cplx tp(const ParamTerm& term, double t) { return term.tpoly[0] + t * (term.tpoly[1] + t * term.tpoly[2]); }
inline cplx tp_dt(const ParamTerm& term, double t) { return term.tpoly[1] + 2.0 * t * term.tpoly[2]; }
inline cplx mono(const ParamTerm& term, const CVec& x) {
    cplx v = 1.0;
    if (term.a >= 0) v *= x(term.a);
    if (term.b >= 0) v *= x(term.b);
    return v;
}

}  // namespace

CMat ParamMatrix::value(double t, const CVec& x) const {
    CMat m = CMat::Zero(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& term : at(i, j)) m(i, j) += tp(term, t) * mono(term, x);
    return m;
}

CMat ParamMatrix::dt(double t, const CVec& x) const {
    CMat m = CMat::Zero(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& term : at(i, j)) m(i, j) += tp_dt(term, t) * mono(term, x);
    return m;
}

void ParamMatrix::dx(double t, const CVec& x, std::vector<CMat>& out) const {
    out.assign(nvars, CMat::Zero(n, k));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& term : at(i, j)) {
                cplx p = tp(term, t);
                if (term.a >= 0) out[term.a](i, j) += p * (term.b >= 0 ? x(term.b) : cplx(1.0));
                if (term.b >= 0) out[term.b](i, j) += p * (term.a >= 0 ? x(term.a) : cplx(1.0));
            }
}

std::vector<std::vector<int>> ParamMatrix::columns_of_var() const {
    std::vector<std::vector<int>> cols(nvars);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& term : at(i, j))
                for (int v : {term.a, term.b})
                    if (v >= 0 && std::find(cols[v].begin(), cols[v].end(), j) == cols[v].end()) cols[v].push_back(j);
    for (auto& c : cols) std::sort(c.begin(), c.end());
    return cols;
}

const char* link_kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::Trivial: return "trivial";
        case LinkKind::Rename: return "rename";
        case LinkKind::StayHomotopy: return "stay-homotopy";
        case LinkKind::SwapHomotopy: return "swap-homotopy";
    }
    return "?";
}

ParamMatrix StageLink::family(cplx gamma, cplx delta) const {
    ParamMatrix z = ParamMatrix::from_pattern(child);
    const std::array<cplx, 3> c{1.0, gamma - 1.0 + delta, -delta};
    const std::array<cplx, 3> lin{0.0, 1.0, 0.0};
    const int r0 = r - 1;  // 0-based critical row
    if (kind == LinkKind::StayHomotopy) {
        z.at(r0, moving_col) = {{c, -1, -1}};
        z.at(r0 + 1, moving_col) = {{lin, -1, -1}};
    } else if (kind == LinkKind::SwapHomotopy) {
        int beta = child.at(r + 1, partner_col + 1);
        std::vector<std::vector<ParamTerm>> col(child.n);
        for (int i = 0; i < child.n; ++i) {
            for (const auto& term : z.at(i, moving_col)) col[i].push_back({c, beta, term.a});
            if (i == r0 + 1) col[i].push_back({lin, beta, -1});
            if (i < r0)
                for (const auto& term : z.at(i, partner_col)) col[i].push_back({lin, term.a, term.b});
        }
        for (int i = 0; i < child.n; ++i) z.at(i, moving_col) = col[i];
    }
    return z;
}

CVec StageLink::to_parent(const CMat& y, cplx gamma, double tol) const {
    // Parent basis is A * E(1) with E(1) = [[gamma, 1], [1, 0]] on rows/columns (r, r+1).
    CMat w = y;
    w.row(r - 1) = y.row(r);
    w.row(r) = y.row(r - 1) - gamma * y.row(r);
    return fit_pattern(w, parent, tol);
}

StageLink link_stages(const Checkerboard& parent, const Checkerboard& child, Successor successor) {
    const int n = parent.n();
    auto sched = sort_schedule(n);
    if (parent.stage < 0 || parent.stage >= static_cast<int>(sched.size()) || child.stage != parent.stage + 1)
        throw UnlinkedStages("boards are not adjacent stages");
    StageLink link;
    link.r = sched[parent.stage];
    link.stage_case = classify_stage(parent, link.r);
    link.successor = successor;
    bool found = false;
    for (const auto& mv : move_red(parent, link.r))
        if (mv.board == child && mv.kind == successor) found = true;
    if (!found) throw UnlinkedStages("child is not a successor of the parent board");

    link.child = pattern_from_board(child);
    link.parent = pattern_from_board(parent);
    if (link.child.var_count() != link.parent.var_count())
        throw InvariantViolation("adjacent patterns have different dimensions");
    for (int j = 0; j < link.child.k; ++j)
        if (link.child.pivot[j] == link.r) link.moving_col = j;

    const StageCase& sc = link.stage_case;
    auto constant_kind = [&] { return link.child.same_layout(link.parent) ? LinkKind::Trivial : LinkKind::Rename; };
    if (sc.q2 == Q2::gamma || sc.q1 == Q1::a) {
        link.kind = constant_kind();
        return link;
    }
    if (link.moving_col < 0) throw InvariantViolation("no child column in the critical row");
    if (successor == Successor::Swap) {
        int drop_row = parent.red[sc.diag_red].row;
        for (int j = 0; j < link.child.k; ++j)
            if (link.child.pivot[j] == drop_row) link.partner_col = j;
        if (link.partner_col < 0 || link.child.at(link.r + 1, link.partner_col + 1) < 0)
            throw InvariantViolation("swap partner column lacks its critical-row variable");
        link.kind = LinkKind::SwapHomotopy;
        return link;
    }
    // A stay move keeps the geometry fixed exactly when a generic point of the family at t=1
    // already lies on the child's component.
    link.kind = LinkKind::StayHomotopy;
    Rng rng(0x5eed);
    CVec x(link.child.var_count());
    for (int v = 0; v < x.size(); ++v) x(v) = rng.gaussian();
    CMat y = link.family(rng.unit_circle()).value(1.0, x);
    try {
        fit_pattern(y, link.child);
        link.kind = constant_kind();
    } catch (const PatternMismatch&) {
    }
    return link;
}

}  // namespace lrh
