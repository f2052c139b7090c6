#include "lrh/tracking.hpp"

#include <cmath>

#include "lrh/errors.hpp"

namespace lrh {

void TrackerSettings::validate() const {
    if (!(newton_tol > 0)) throw InputError("newton_tol must be positive");
    if (max_newton_iters < 1) throw InputError("max_newton_iters must be at least 1");
    if (!(0 < min_step && min_step <= initial_step && initial_step <= max_step && max_step < 1))
        throw InputError("step sizes must satisfy 0 < min <= initial <= max < 1");
    if (!(step_expansion >= 1)) throw InputError("step_expansion must be at least 1");
    if (!(step_contraction > 0 && step_contraction < 1)) throw InputError("step_contraction must lie in (0,1)");
    if (!(max_correction_ratio > 0)) throw InputError("max_correction_ratio must be positive");
}

const char* path_status_name(PathStatus s) {
    switch (s) {
        case PathStatus::Success: return "success";
        case PathStatus::MinStepReached: return "min-step-reached";
        case PathStatus::NewtonDiverged: return "newton-diverged";
    }
    return "?";
}

namespace {

struct Eval {
    CVec h, ht;
    CMat jx;
    double residual = 0.0;
};

void eval(const Homotopy& sys, double t, const CVec& x, Eval& e) {
    double scale = 1.0;
    sys.jacobian_scaled(t, x, e.h, e.jx, e.ht, scale);
    e.residual = e.h.norm() / scale;
}

bool solve_linear(const CMat& a, const CVec& b, CVec& out) {
    if (a.rows() == 0) {
        out.resize(0);
        return true;
    }
    Eigen::PartialPivLU<CMat> lu(a);
    out = lu.solve(b);
    return out.allFinite();
}

}  // namespace

double relative_residual(const Homotopy& sys, double t, const CVec& x) {
    CVec h;
    double scale = 1.0;
    sys.evaluate_scaled(t, x, h, scale);
    return h.norm() / scale;
}

NewtonResult newton_correct(const Homotopy& sys, const CVec& x, double t, const TrackerSettings& settings) {
    NewtonResult r;
    r.x = x;
    Eval e;
    eval(sys, t, r.x, e);
    r.residual = e.residual;
    int growth = 0;
    double prev_step = -1.0;
    while (r.residual > settings.newton_tol && r.iterations < settings.max_newton_iters) {
        CVec dx;
        if (!solve_linear(e.jx, -e.h, dx)) {
            r.diverged = true;
            return r;
        }
        double step = dx.norm();
        // Corrections must contract; otherwise the predictor left the basin.
        if (prev_step >= 0 && step > 0.5 * prev_step && step > settings.newton_tol * (1.0 + r.x.norm())) {
            r.diverged = true;
            return r;
        }
        prev_step = step;
        r.x += dx;
        ++r.iterations;
        double before = r.residual;
        eval(sys, t, r.x, e);
        r.residual = e.residual;
        if (!std::isfinite(r.residual)) {
            r.diverged = true;
            return r;
        }
        growth = r.residual > before ? growth + 1 : 0;
        if (growth >= 2) {
            r.diverged = true;
            return r;
        }
    }
    r.converged = r.residual <= settings.newton_tol;
    return r;
}

CVec polish_point(const Homotopy& sys, double t, const CVec& x, int max_iters) {
    CVec best = x;
    Eval e;
    eval(sys, t, best, e);
    double best_res = e.residual;
    for (int it = 0; it < max_iters && best_res > 0; ++it) {
        CVec dx;
        if (!solve_linear(e.jx, -e.h, dx)) break;
        CVec cand = best + dx;
        Eval ec;
        eval(sys, t, cand, ec);
        if (!(ec.residual < best_res)) break;
        best = cand;
        best_res = ec.residual;
        e = ec;
    }
    return best;
}

PathResult track_path(const Homotopy& sys, const CVec& x0, const TrackerSettings& settings, bool keep_trace) {
    PathResult res;
    auto start = newton_correct(sys, x0, 0.0, settings);
    res.newton_iterations += start.iterations;
    res.x = start.x;
    if (!start.converged) {
        res.status = PathStatus::NewtonDiverged;
        res.max_residual = start.residual;
        return res;
    }
    res.max_residual = start.residual;
    double t = 0.0;
    if (!sys.depends_on_t()) {
        auto end = newton_correct(sys, res.x, 1.0, settings);
        res.newton_iterations += end.iterations;
        res.steps = 1;
        res.x = end.x;
        res.t_reached = 1.0;
        res.max_residual = std::max(res.max_residual, end.residual);
        res.status = end.converged ? PathStatus::Success : PathStatus::NewtonDiverged;
        return res;
    }
    double h = settings.initial_step;
    Eval e;
    while (t < 1.0) {
        double dt = std::min(h, 1.0 - t);
        eval(sys, t, res.x, e);
        CVec xdot;
        bool ok = solve_linear(e.jx, -e.ht, xdot);
        NewtonResult corr;
        if (ok) {
            CVec pred = res.x + dt * xdot;
            corr = newton_correct(sys, pred, t + dt, settings);
            res.newton_iterations += corr.iterations;
            // The corrector may only refine the prediction; a large correction means it was
            // captured by a neighbouring path.
            double moved = dt * xdot.norm();
            ok = corr.converged && (corr.x - pred).norm() <= settings.max_correction_ratio * moved + settings.newton_tol * (1.0 + res.x.norm());
        }
        if (keep_trace) res.trace.push_back({t + dt, dt, ok ? corr.residual : -1.0, ok});
        if (ok) {
            t = (dt == 1.0 - t) ? 1.0 : t + dt;
            res.x = corr.x;
            res.max_residual = std::max(res.max_residual, corr.residual);
            ++res.steps;
            h = std::min(h * settings.step_expansion, settings.max_step);
        } else {
            ++res.rejected;
            h *= settings.step_contraction;
            if (h < settings.min_step) {
                res.status = PathStatus::MinStepReached;
                res.t_reached = t;
                return res;
            }
        }
    }
    res.t_reached = 1.0;
    res.status = PathStatus::Success;
    return res;
}

}  // namespace lrh
