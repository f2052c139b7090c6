#include "lrh/equations.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "lrh/errors.hpp"

namespace lrh {

namespace {

std::vector<std::vector<std::int64_t>> binomials(int n) {
    std::vector<std::vector<std::int64_t>> b(n + 1, std::vector<std::int64_t>(n + 2, 0));
    for (int i = 0; i <= n; ++i) {
        b[i][0] = 1;
        for (int j = 1; j <= i; ++j) b[i][j] = b[i - 1][j - 1] + (j <= i - 1 ? b[i - 1][j] : 0);
    }
    return b;
}

std::int64_t choose(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::int64_t v = 1;
    for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
}

// Subsets of {0..n-1} of size c in increasing mask order.
std::vector<std::uint32_t> subsets(int n, int c) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == c) out.push_back(m);
    return out;
}

std::vector<int> bits(std::uint32_t m) {
    std::vector<int> out;
    for (int i = 0; m; ++i, m >>= 1)
        if (m & 1u) out.push_back(i);
    return out;
}

}  // namespace

MinorTable::MinorTable(int n, int k) : n_(n), k_(k) {
    if (n > 24) throw InputError("ambient dimension too large for the minor table");
    binom_ = binomials(n);
    col_offset_.assign(1u << k, -1);
    for (int c = 0; c <= k; ++c)
        for (std::uint32_t cm : subsets(k, c)) {
            col_offset_[cm] = size();
            for (std::uint32_t rm : subsets(n, c)) {
                rows_.push_back(rm);
                cols_.push_back(cm);
                first_step_.push_back(static_cast<int>(steps_.size()));
                if (c == 0) {
                    last_col_.push_back(-1);
                    continue;
                }
                int jl = 31 - std::countl_zero(cm);
                last_col_.push_back(jl);
                std::uint32_t sub_cols = cm & ~(1u << jl);
                int pos = 0;
                for (int i : bits(rm)) {
                    double sign = ((pos + c - 1) % 2 == 0) ? 1.0 : -1.0;
                    steps_.push_back({i, index(rm & ~(1u << i), sub_cols), sign});
                    ++pos;
                }
            }
        }
    first_step_.push_back(static_cast<int>(steps_.size()));
}

int MinorTable::index(std::uint32_t rowmask, std::uint32_t colmask) const {
    std::int64_t rank = 0;
    int idx = 0;
    for (int i : bits(rowmask)) rank += binom_[i][++idx];
    return col_offset_[colmask] + static_cast<int>(rank);
}

void MinorTable::evaluate(const CMat& y, CVec& out) const {
    out.resize(size());
    for (int m = 0; m < size(); ++m) {
        if (last_col_[m] < 0) {
            out(m) = 1.0;
            continue;
        }
        cplx acc = 0.0;
        for (int s = first_step_[m]; s < first_step_[m + 1]; ++s) {
            const Step& st = steps_[s];
            acc += st.sign * y(st.row, last_col_[m]) * out(st.sub);
        }
        out(m) = acc;
    }
}

void MinorTable::evaluate(const CMat& y, const std::vector<CMat>& dy, CVec& out, CMat& dout) const {
    const int nv = static_cast<int>(dy.size());
    out.resize(size());
    dout.setZero(nv, size());
    for (int m = 0; m < size(); ++m) {
        if (last_col_[m] < 0) {
            out(m) = 1.0;
            continue;
        }
        const int j = last_col_[m];
        cplx acc = 0.0;
        for (int s = first_step_[m]; s < first_step_[m + 1]; ++s) {
            const Step& st = steps_[s];
            cplx ys = st.sign * y(st.row, j);
            cplx sub = st.sign * out(st.sub);
            acc += ys * out(st.sub);
            dout.col(m) += ys * dout.col(st.sub);
            for (int v = 0; v < nv; ++v) dout(v, m) += dy[v](st.row, j) * sub;
        }
        out(m) = acc;
    }
}

void MinorSystem::evaluate(double t, const CVec& x, CVec& h) const {
    CVec mu;
    minors.evaluate(plane(t, x), mu);
    h = coef * mu;
}

void MinorSystem::jacobian(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht) const {
    double scale;
    jacobian_scaled(t, x, h, jx, ht, scale);
}

namespace {

double term_scale(const CMat& coef, const CVec& mu) {
    if (coef.rows() == 0) return 1.0;
    return std::max(1.0, (coef.cwiseAbs() * mu.cwiseAbs()).norm());
}

}  // namespace

void MinorSystem::evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const {
    CVec mu;
    minors.evaluate(plane(t, x), mu);
    h = coef * mu;
    scale = term_scale(coef, mu);
}

void MinorSystem::jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const {
    std::vector<CMat> dz;
    z.dx(t, x, dz);
    std::vector<CMat> dy;
    dy.reserve(dz.size() + 1);
    for (const auto& d : dz) dy.push_back(basis * d);
    dy.push_back(basis * z.dt(t, x));
    CVec mu;
    CMat dmu;
    minors.evaluate(plane(t, x), dy, mu, dmu);
    h = coef * mu;
    CMat full = coef * dmu.transpose();
    jx = full.leftCols(q());
    ht = full.col(q());
    scale = term_scale(coef, mu);
}

double MinorSystem::unrandomized_residual(double t, const CVec& x) const {
    const CMat& c = unrandomized.rows() ? unrandomized : coef;
    if (c.rows() == 0) return 0.0;
    CVec mu;
    minors.evaluate(plane(t, x), mu);
    return (c * mu).norm() / term_scale(c, mu);
}

FlagHomotopySystem::FlagHomotopySystem(std::vector<Bracket> conditions, std::vector<CMat> start,
                                       std::vector<CMat> target, cplx gamma, const CMat& chart, std::uint64_t seed)
    : conditions_(std::move(conditions)), start_(std::move(start)), target_(std::move(target)), gamma_(gamma),
      chart_(chart) {
    if (conditions_.empty()) throw InputError("no conditions");
    n_ = conditions_[0].n;
    k_ = conditions_[0].k;
    if (start_.size() != conditions_.size() || target_.size() != conditions_.size())
        throw InputError("one start and one target flag per condition required");
    for (std::size_t c = 0; c < conditions_.size(); ++c) {
        if (conditions_[c].n != n_ || conditions_[c].k != k_) throw InputError("conditions live in different Grassmannians");
        if (start_[c].rows() != n_ || start_[c].cols() != n_ || target_[c].rows() != n_ || target_[c].cols() != n_)
            throw InputError("flags must be n x n");
    }
    if (chart_.rows() != n_ || chart_.cols() != n_) throw InputError("chart must be n x n");
    minors_ = MinorTable(n_, k_);
    // Selection of minors per condition: rows below omega_i, size k-i+1.
    std::vector<std::vector<int>> picked(conditions_.size());
    for (std::size_t c = 0; c < conditions_.size(); ++c) {
        const Bracket& b = conditions_[c];
        for (int i = 1; i <= k_; ++i) {
            int w = b.e[i - 1];
            if (w == n_ - k_ + i) continue;
            std::uint32_t below = ((1u << n_) - 1) & ~((1u << w) - 1);
            int size = k_ - i + 1;
            for (int m = 0; m < minors_.size(); ++m) {
                std::uint32_t rm = minors_.rowmask(m);
                if (std::popcount(rm) == size && (rm & ~below) == 0) picked[c].push_back(m);
            }
        }
        raw_ += static_cast<int>(picked[c].size());
    }
    const int q = unknowns();
    if (raw_ < q) throw UnderdeterminedSystem(std::to_string(raw_) + " equations for " + std::to_string(q) + " unknowns");
    Rng rng(seed);
    CMat r = random_unit_circle_matrix(q, raw_, rng);
    int col = 0;
    for (std::size_t c = 0; c < conditions_.size(); ++c) {
        CMat cm = CMat::Zero(q, minors_.size());
        for (int m : picked[c]) cm.col(m) += r.col(col++);
        coef_.push_back(cm);
    }
}

CMat FlagHomotopySystem::flag_at(int c, double t) const { return (1.0 - t) * start_[c] + t * gamma_ * target_[c]; }

CMat FlagHomotopySystem::plane(const CVec& x) const {
    CMat z(n_, k_);
    z.topRows(k_).setIdentity();
    for (int i = 0; i < n_ - k_; ++i)
        for (int j = 0; j < k_; ++j) z(k_ + i, j) = x(j * (n_ - k_) + i);
    return chart_ * z;
}

CVec FlagHomotopySystem::coordinates(const CMat& y) const {
    CMat v = chart_.partialPivLu().solve(y);
    CMat top = v.topRows(k_);
    Eigen::JacobiSVD<CMat> svd(top);
    const auto& s = svd.singularValues();
    if (s(k_ - 1) <= 1e-10 * std::max(1.0, s(0))) throw PatternMismatch("plane is outside the affine chart");
    CMat w = v.bottomRows(n_ - k_) * top.inverse();
    CVec x(k_ * (n_ - k_));
    for (int i = 0; i < n_ - k_; ++i)
        for (int j = 0; j < k_; ++j) x(j * (n_ - k_) + i) = w(i, j);
    return x;
}

void FlagHomotopySystem::run(double t, const CVec& x, CVec& h, CMat* jx, CVec* ht, double& scale) const {
    const int q = unknowns();
    CMat y = plane(x);
    h = CVec::Zero(q);
    if (jx) {
        jx->setZero(q, q);
        ht->setZero(q);
    }
    double s2 = 0.0;
    for (std::size_t c = 0; c < conditions_.size(); ++c) {
        if (coef_[c].cwiseAbs().maxCoeff() == 0.0) continue;
        Eigen::PartialPivLU<CMat> lu(flag_at(static_cast<int>(c), t));
        CMat v = lu.solve(y);
        CVec mu;
        if (!jx) {
            minors_.evaluate(v, mu);
        } else {
            std::vector<CMat> dv(q + 1, CMat::Zero(n_, k_));
            CMat nu = lu.solve(chart_);
            for (int i = 0; i < n_ - k_; ++i)
                for (int j = 0; j < k_; ++j) dv[j * (n_ - k_) + i].col(j) = nu.col(k_ + i);
            dv[q] = -lu.solve((gamma_ * target_[c] - start_[c]) * v);
            CMat dmu;
            minors_.evaluate(v, dv, mu, dmu);
            CMat full = coef_[c] * dmu.transpose();
            *jx += full.leftCols(q);
            *ht += full.col(q);
        }
        h += coef_[c] * mu;
        double sc = (coef_[c].cwiseAbs() * mu.cwiseAbs()).norm();
        s2 += sc * sc;
    }
    scale = std::max(1.0, std::sqrt(s2));
}

void FlagHomotopySystem::evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const {
    run(t, x, h, nullptr, nullptr, scale);
}

void FlagHomotopySystem::jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const {
    run(t, x, h, &jx, &ht, scale);
}

int minor_count(const Bracket& b) {
    const int n = b.n, k = b.k;
    std::int64_t p = 0;
    for (int i = 1; i <= k; ++i) {
        int w = b.e[i - 1];
        if (w == n - k + i) continue;
        int d = k + w - i + 1;
        p += choose(n, d) * choose(k + w, d);
    }
    return static_cast<int>(p);
}

MinorSystem schubert_equations(const std::vector<std::pair<Bracket, CMat>>& conditions, const ParamMatrix& z,
                               const CMat& basis, const std::vector<std::string>& var_names) {
    MinorSystem sys;
    sys.n = z.n;
    sys.k = z.k;
    sys.z = z;
    sys.basis = basis;
    sys.minors = MinorTable(z.n, z.k);
    sys.var_names = var_names;
    const int n = z.n, k = z.k;
    if (basis.rows() != n || basis.cols() != n) throw InputError("basis must be n x n");

    std::vector<CVec> rows;
    for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
        const auto& [b, flag] = conditions[ci];
        if (b.n != n || b.k != k) throw InputError("bracket " + b.str() + " does not match the chart");
        if (flag.rows() != n || flag.cols() != n) throw InputError("flag must be n x n");
        for (int i = 1; i <= k; ++i) {
            const int w = b.e[i - 1];
            if (w == n - k + i) continue;
            MinorCondition mc{static_cast<int>(ci), i, w, k + w, k + w - i + 1};
            const int cond_index = static_cast<int>(sys.conditions.size());
            sys.conditions.push_back(mc);
            const int d = mc.minor_size;
            for (std::uint32_t rm : subsets(n, d)) {
                std::vector<int> rlist = bits(rm);
                for (std::uint32_t km : subsets(mc.columns, d)) {
                    std::uint32_t cm = km & ((1u << k) - 1);
                    std::vector<int> dlist = bits(km >> k);
                    const int c = std::popcount(cm);
                    CVec a = CVec::Zero(sys.minors.size());
                    // Generalized Laplace expansion along the chosen columns of Y.
                    for (std::uint32_t sm : subsets(d, c)) {
                        std::uint32_t srows = 0, nrows = 0;
                        int possum = c * (c + 1) / 2;
                        for (int p = 0; p < d; ++p) {
                            if (sm & (1u << p)) {
                                srows |= 1u << rlist[p];
                                possum += p + 1;
                            } else {
                                nrows |= 1u << rlist[p];
                            }
                        }
                        cplx det = 1.0;
                        if (!dlist.empty()) {
                            std::vector<int> nr = bits(nrows);
                            CMat sub(nr.size(), dlist.size());
                            for (std::size_t r = 0; r < nr.size(); ++r)
                                for (std::size_t s = 0; s < dlist.size(); ++s) sub(r, s) = flag(nr[r], dlist[s]);
                            det = sub.determinant();
                        }
                        a(sys.minors.index(srows, cm)) += (possum % 2 == 0 ? 1.0 : -1.0) * det;
                    }
                    rows.push_back(a);
                    sys.info.push_back({cond_index, rm, km});
                }
            }
        }
    }
    sys.raw_count = static_cast<int>(rows.size());

    // Prune equations that vanish identically on the chart.
    Rng rng(0x7a11);
    std::vector<CVec> mu(2);
    for (auto& m : mu) {
        CVec x(z.nvars);
        for (int v = 0; v < z.nvars; ++v) x(v) = rng.gaussian();
        sys.minors.evaluate(basis * z.value(0.1 + 0.8 * rng.uniform(), x), m);
    }
    std::vector<CVec> kept;
    std::vector<EquationInfo> kept_info;
    for (std::size_t e = 0; e < rows.size(); ++e) {
        bool live = false;
        for (const auto& m : mu) {
            double scale = rows[e].cwiseAbs().dot(m.cwiseAbs());
            if (scale > 0 && std::abs(rows[e].cwiseProduct(m).sum()) > 1e-10 * scale) live = true;
        }
        if (live) {
            kept.push_back(rows[e]);
            kept_info.push_back(sys.info[e]);
        }
    }
    sys.info = kept_info;
    sys.coef.resize(kept.size(), sys.minors.size());
    for (std::size_t e = 0; e < kept.size(); ++e) sys.coef.row(e) = kept[e].transpose();
    return sys;
}

MinorSystem randomize(const MinorSystem& sys, std::uint64_t seed) {
    if (sys.p() < sys.q())
        throw UnderdeterminedSystem(std::to_string(sys.p()) + " equations for " + std::to_string(sys.q()) + " unknowns");
    MinorSystem out = sys;
    CMat normalized = sys.coef;
    for (int e = 0; e < normalized.rows(); ++e) normalized.row(e) /= normalized.row(e).norm();
    Rng rng(seed);
    out.coef = random_unit_circle_matrix(sys.q(), sys.p(), rng) * normalized;
    out.unrandomized = normalized;
    out.info.clear();
    return out;
}

namespace {

using Poly = std::map<std::vector<int>, cplx>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            out[m] += ca * cb;
        }
    return out;
}

void poly_axpy(Poly& y, cplx a, const Poly& x) {
    for (const auto& [m, c] : x) y[m] += a * c;
}

void poly_clean(Poly& p, double tol) {
    for (auto it = p.begin(); it != p.end();) {
        if (std::abs(it->second) <= tol) it = p.erase(it);
        else ++it;
    }
}

std::string fmt_coef(cplx c) {
    std::ostringstream os;
    os.precision(17);
    os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "*i)";
    return os.str();
}

}  // namespace

std::string Polynomial::str(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << fmt_coef(c);
        for (std::size_t v = 0; v < m.size(); ++v) {
            if (m[v] == 0) continue;
            os << '*' << names[v];
            if (m[v] > 1) os << '^' << m[v];
        }
    }
    return os.str();
}

std::vector<Polynomial> MinorSystem::expand() const {
    const int nv = q() + 1;
    auto mono = [&](int a, int b, int tdeg) {
        std::vector<int> m(nv, 0);
        if (a >= 0) ++m[a];
        if (b >= 0) ++m[b];
        m[nv - 1] += tdeg;
        return m;
    };
    std::vector<Poly> zp(n * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (const auto& term : z.at(i, j))
                for (int d = 0; d < 3; ++d)
                    if (term.tpoly[d] != 0.0) zp[i * k + j][mono(term.a, term.b, d)] += term.tpoly[d];
    std::vector<Poly> yp(n * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            for (int l = 0; l < n; ++l)
                if (basis(i, l) != 0.0) poly_axpy(yp[i * k + j], basis(i, l), zp[l * k + j]);
            poly_clean(yp[i * k + j], 0.0);
        }
    // Minors by the same recursion as the numeric table.
    std::vector<Poly> mp(minors.size());
    for (int m = 0; m < minors.size(); ++m) {
        std::uint32_t rm = minors.rowmask(m), cm = minors.colmask(m);
        int c = std::popcount(cm);
        if (c == 0) {
            mp[m][std::vector<int>(nv, 0)] = 1.0;
            continue;
        }
        int jl = 31 - std::countl_zero(cm);
        int pos = 0;
        for (int i : bits(rm)) {
            double sign = ((pos + c - 1) % 2 == 0) ? 1.0 : -1.0;
            poly_axpy(mp[m], sign, poly_mul(yp[i * k + jl], mp[minors.index(rm & ~(1u << i), cm & ~(1u << jl))]));
            ++pos;
        }
    }
    std::vector<Polynomial> out(p());
    for (int e = 0; e < p(); ++e) {
        double scale = 0.0;
        for (int m = 0; m < minors.size(); ++m) {
            if (coef(e, m) == 0.0) continue;
            poly_axpy(out[e].terms, coef(e, m), mp[m]);
            for (const auto& [mono_, c] : mp[m]) scale = std::max(scale, std::abs(coef(e, m) * c));
        }
        poly_clean(out[e].terms, 1e-13 * scale);
    }
    return out;
}

std::string MinorSystem::dump() const {
    std::vector<std::string> names;
    for (int v = 0; v < q(); ++v)
        names.push_back(v < static_cast<int>(var_names.size()) ? var_names[v] : "x" + std::to_string(v));
    names.push_back("t");
    std::ostringstream os;
    os << "# " << p() << " polynomials in " << q() << " variables\n";
    for (const auto& poly : expand()) os << poly.str(names) << '\n';
    return os.str();
}

}  // namespace lrh
