#pragma once

#include <string>
#include <vector>

#include "lrh/equations.hpp"

namespace lrh {

struct TrackerSettings {
    double newton_tol = 1e-8;
    int max_newton_iters = 4;
    double initial_step = 0.1;
    double min_step = 1e-6;
    double max_step = 0.25;
    double step_expansion = 2.0;
    double step_contraction = 0.5;
    // A corrector that moves farther than this fraction of the predictor step rejects the step.
    double max_correction_ratio = 0.25;

    void validate() const;  // throws InputError
};

enum class PathStatus { Success, MinStepReached, NewtonDiverged };
const char* path_status_name(PathStatus s);

// |H(x, t)| relative to the size of its terms.
double relative_residual(const Homotopy& sys, double t, const CVec& x);

struct NewtonResult {
    CVec x;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double residual = 0.0;
};

NewtonResult newton_correct(const Homotopy& sys, const CVec& x, double t, const TrackerSettings& settings);

// Newton iterations at fixed t while the relative residual keeps dropping.
CVec polish_point(const Homotopy& sys, double t, const CVec& x, int max_iters = 8);

struct TracePoint {
    double t = 0.0;
    double step = 0.0;
    double residual = 0.0;
    bool accepted = false;
};

struct PathResult {
    CVec x;
    PathStatus status = PathStatus::Success;
    double t_reached = 0.0;
    int steps = 0;
    int rejected = 0;
    int newton_iterations = 0;
    double max_residual = 0.0;
    std::vector<TracePoint> trace;  // filled only when requested
};

// Euler predictor, Newton corrector, adaptive step from t=0 to t=1.
PathResult track_path(const Homotopy& sys, const CVec& x0, const TrackerSettings& settings, bool keep_trace = false);

}  // namespace lrh
