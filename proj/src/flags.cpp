#include "lrh/flags.hpp"

#include "lrh/checkers.hpp"
#include "lrh/errors.hpp"

namespace lrh {

void check_flag(const Flag& f) {
    if (f.basis.rows() != f.basis.cols()) throw NumericalDegeneracy("flag basis must be square");
    if (!f.basis.allFinite() || singular_ratio(f.basis) <= 1e-10) throw NumericalDegeneracy("flag basis is numerically singular");
}

Flag identity_flag(int n) { return Flag{CMat::Identity(n, n)}; }

MovingFlagSchedule build_schedule(int n, std::uint64_t seed) {
    MovingFlagSchedule s;
    s.n = n;
    auto order = sort_schedule(n);
    s.rows.assign(order.rbegin(), order.rend());
    Rng rng(seed);
    s.stage.push_back(CMat::Identity(n, n));
    for (int r : s.rows) {
        cplx g = rng.unit_circle();
        s.gammas.push_back(g);
        CMat a = s.stage.back();
        CMat b = a;
        b.col(r - 1) = g * a.col(r - 1) + a.col(r);
        b.col(r) = a.col(r - 1);
        s.stage.push_back(std::move(b));
    }
    return s;
}

CMat moving_flag_at(const MovingFlagSchedule& sched, int s, double t, cplx delta) {
    const CMat& a = sched.stage[s];
    if (t == 0.0) return a;
    if (t == 1.0) return sched.stage[s + 1];
    int r = sched.rows[s];
    cplx c = 1.0 + (sched.gammas[s] - 1.0) * t + delta * t * (1.0 - t);
    CMat m = a;
    m.col(r - 1) = c * a.col(r - 1) + t * a.col(r);
    m.col(r) = t * a.col(r - 1) + (1.0 - t) * a.col(r);
    return m;
}

Flag random_flag(int n, std::uint64_t seed) {
    Rng rng(seed);
    while (true) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.gaussian();
        if (singular_ratio(m) > 1e-10) return Flag{m};
    }
}

}  // namespace lrh
