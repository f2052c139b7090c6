#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrh/combinatorics.hpp"
#include "lrh/patterns.hpp"

namespace lrh {

// All minors of an n x k matrix with |rows| = |cols| <= k, evaluated bottom up by
// expansion along the last column.
class MinorTable {
public:
    MinorTable() = default;
    MinorTable(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    int size() const { return static_cast<int>(rows_.size()); }
    int index(std::uint32_t rowmask, std::uint32_t colmask) const;
    std::uint32_t rowmask(int m) const { return rows_[m]; }
    std::uint32_t colmask(int m) const { return cols_[m]; }

    void evaluate(const CMat& y, CVec& out) const;
    // Forward-mode derivatives: dy[v] is dY/dv; dout(v, m) = d minor_m / dv.
    void evaluate(const CMat& y, const std::vector<CMat>& dy, CVec& out, CMat& dout) const;

private:
    struct Step {
        int row;
        int sub;
        double sign;
    };
    int n_ = 0, k_ = 0;
    std::vector<std::uint32_t> rows_, cols_;
    std::vector<int> last_col_, first_step_;
    std::vector<Step> steps_;
    std::vector<int> col_offset_;
    std::vector<std::vector<std::int64_t>> binom_;
};

// One determinantal condition: dim(Y cap F_omega_i) >= i.
struct MinorCondition {
    int flag = 0;      // caller's label for the flag
    int entry = 0;     // i (1-based)
    int omega = 0;     // omega_i
    int columns = 0;   // k + omega_i
    int minor_size = 0;
};

struct EquationInfo {
    int condition = 0;         // index into MinorSystem::conditions
    std::uint32_t rows = 0;    // rows of [Y | F_omega]
    std::uint32_t columns = 0; // columns of [Y | F_omega]
};

struct Polynomial {
    // Exponents of (x_0, ..., x_{q-1}, t).
    std::map<std::vector<int>, cplx> terms;
    std::string str(const std::vector<std::string>& names) const;
};

// Polynomial system H(x, t) as seen by the path tracker. `scale` is the size of the terms
// that make up H, used for relative residuals.
class Homotopy {
public:
    virtual ~Homotopy() = default;
    virtual int unknowns() const = 0;
    virtual bool depends_on_t() const = 0;
    virtual void evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const = 0;
    // jx is p x q, ht has length p.
    virtual void jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const = 0;
};

// Square or overdetermined polynomial system in the chart variables, with Y = basis * Z(t, x).
// Each equation is a linear combination of minors of Y whose coefficients are flag minors.
class MinorSystem : public Homotopy {
public:
    int n = 0, k = 0;
    ParamMatrix z;
    CMat basis;
    std::vector<MinorCondition> conditions;
    std::vector<EquationInfo> info;  // empty after randomization
    int raw_count = 0;               // equations before pruning
    CMat coef;                       // p x minors.size()
    CMat unrandomized;               // row-normalized equations before randomization (empty before)
    MinorTable minors;
    std::vector<std::string> var_names;

    int p() const { return static_cast<int>(coef.rows()); }
    int q() const { return z.nvars; }

    CMat plane(double t, const CVec& x) const { return basis * z.value(t, x); }
    void evaluate(double t, const CVec& x, CVec& h) const;
    // jx is p x q, ht has length p.
    void jacobian(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht) const;

    int unknowns() const override { return q(); }
    bool depends_on_t() const override { return z.depends_on_t(); }
    void evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const override;
    void jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const override;

    // Relative residual of the equations before randomization; catches points that solve the
    // randomized system only.
    double unrandomized_residual(double t, const CVec& x) const;

    std::vector<Polynomial> expand() const;
    std::string dump() const;
};

int minor_count(const Bracket& b);

// Straight-line flag homotopy N_c(t) = (1-t) start_c + t * gamma * target_c in the chart
// Y = U [I; W]. Condition c holds iff the rows below omega_i of N_c(t)^{-1} Y have rank <= k-i;
// all those minors are randomized down to k(n-k) equations.
class FlagHomotopySystem : public Homotopy {
public:
    FlagHomotopySystem(std::vector<Bracket> conditions, std::vector<CMat> start, std::vector<CMat> target, cplx gamma,
                       const CMat& chart, std::uint64_t seed);

    int n() const { return n_; }
    int k() const { return k_; }
    int unknowns() const override { return k_ * (n_ - k_); }
    bool depends_on_t() const override { return true; }
    void evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const override;
    void jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const override;

    CMat plane(const CVec& x) const;      // U [I; W]
    CVec coordinates(const CMat& y) const;  // throws PatternMismatch if y is outside the chart
    CMat flag_at(int c, double t) const;
    int equations_before_randomization() const { return raw_; }

private:
    void run(double t, const CVec& x, CVec& h, CMat* jx, CVec* ht, double& scale) const;

    int n_ = 0, k_ = 0, raw_ = 0;
    std::vector<Bracket> conditions_;
    std::vector<CMat> start_, target_;
    cplx gamma_;
    CMat chart_;
    MinorTable minors_;
    std::vector<CMat> coef_;  // per condition: unknowns x minors
};

// Equations for each (bracket, flag) pair imposed on the chart Z. Identically zero
// equations are pruned.
MinorSystem schubert_equations(const std::vector<std::pair<Bracket, CMat>>& conditions, const ParamMatrix& z,
                               const CMat& basis, const std::vector<std::string>& var_names = {});

// Normalizes rows and multiplies by a q x p unit-circle matrix. Throws UnderdeterminedSystem if p < q.
MinorSystem randomize(const MinorSystem& sys, std::uint64_t seed);

}  // namespace lrh
