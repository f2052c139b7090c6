#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrh/errors.hpp"
#include "lrh/flags.hpp"
#include "lrh/tracking.hpp"
#include "lrh/verify.hpp"

using namespace lrh;

namespace {

CMat random_matrix(int r, int c, Rng& rng) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.gaussian();
    return m;
}

// A flag whose 2-dimensional member meets the plane y.
CMat flag_meeting(const CMat& y, Rng& rng) {
    CMat f = random_matrix(y.rows(), y.rows(), rng);
    f.col(0) = y * random_matrix(y.cols(), 1, rng);
    return f;
}

struct FourLinesEdge {
    StageLink link;
    MovingFlagSchedule sched;
    int step = 0;
};

FourLinesEdge four_lines_edge(Successor kind) {
    Bracket b(4, {2, 4});
    auto tree = game_tree(b, b);
    for (const auto& node : tree.nodes)
        if (node.parent >= 0 && node.kind == kind && node.board.stage == 2) {
            FourLinesEdge e;
            e.link = link_stages(tree.nodes[node.parent].board, node.board, node.kind);
            e.sched = build_schedule(4, 77);
            e.step = schedule_step_of_game_stage(4, 1);
            return e;
        }
    throw std::logic_error("edge not found");
}

// Remaining conditions chosen so that a given child point solves the system at t = 0.
MinorSystem edge_system(const FourLinesEdge& e, const CVec& x0, std::vector<CMat>& flags, Rng& rng) {
    auto fam = e.link.family(e.sched.gammas[e.step]);
    CMat y0 = e.sched.stage[e.step] * fam.value(0.0, x0);
    flags = {flag_meeting(y0, rng), flag_meeting(y0, rng)};
    Bracket b(4, {2, 4});
    return randomize(schubert_equations({{b, flags[0]}, {b, flags[1]}}, fam, e.sched.stage[e.step]), 5);
}

// x^2 = t - 1/2: two paths meeting at a branch point inside [0, 1].
class BranchPoint : public Homotopy {
public:
    int unknowns() const override { return 1; }
    bool depends_on_t() const override { return true; }
    void evaluate_scaled(double t, const CVec& x, CVec& h, double& scale) const override {
        h.resize(1);
        h(0) = x(0) * x(0) - (t - 0.5);
        scale = 1.0;
    }
    void jacobian_scaled(double t, const CVec& x, CVec& h, CMat& jx, CVec& ht, double& scale) const override {
        evaluate_scaled(t, x, h, scale);
        jx.resize(1, 1);
        jx(0, 0) = 2.0 * x(0);
        ht.resize(1);
        ht(0) = -1.0;
    }
};

}  // namespace

TEST_CASE("settings validation") {
    TrackerSettings s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.newton_tol == 1e-8);
    CHECK(s.max_newton_iters == 4);
    CHECK(s.initial_step == 0.1);
    CHECK(s.min_step == 1e-6);
    CHECK(s.max_step == 0.25);
    CHECK(s.step_expansion == 2.0);
    CHECK(s.step_contraction == 0.5);
    s.min_step = 0.5;
    CHECK_THROWS_AS(s.validate(), InputError);
}

TEST_CASE("Newton correction") {
    Rng rng(1);
    auto e = four_lines_edge(Successor::Swap);
    CVec x0(2);
    x0 << rng.gaussian(), rng.gaussian();
    std::vector<CMat> flags;
    auto sys = edge_system(e, x0, flags, rng);
    TrackerSettings s;

    auto exact = newton_correct(sys, x0, 0.0, s);
    CHECK(exact.converged);
    CHECK(exact.iterations <= 1);
    CHECK((exact.x - x0).norm() < 1e-12);

    // Quadratic convergence from a 1e-4 perturbation.
    CVec pert = x0 + CVec::Constant(2, cplx(1e-4, -1e-4));
    s.max_newton_iters = 1;
    s.newton_tol = 1e-15;
    double r0 = relative_residual(sys, 0.0, pert);
    auto one = newton_correct(sys, pert, 0.0, s);
    auto two = newton_correct(sys, one.x, 0.0, s);
    CHECK(one.residual < 1e-3 * r0);
    CHECK(two.residual < 1e-3 * one.residual + 1e-15);

    s = TrackerSettings{};
    auto far = newton_correct(sys, CVec::Constant(2, 1e6), 0.0, s);
    CHECK_FALSE(far.converged);
}

TEST_CASE("four-lines swap homotopy reaches the parent component") {
    Rng rng(2);
    auto e = four_lines_edge(Successor::Swap);
    REQUIRE(e.link.kind == LinkKind::SwapHomotopy);
    for (int trial = 0; trial < 5; ++trial) {
        CVec x0(2);
        x0 << rng.gaussian(), rng.gaussian();
        std::vector<CMat> flags;
        auto sys = edge_system(e, x0, flags, rng);
        auto res = track_path(sys, x0, TrackerSettings{});
        REQUIRE(res.status == PathStatus::Success);
        CHECK(res.t_reached == 1.0);
        CHECK(res.max_residual <= 1e-8);
        CVec xp = e.link.to_parent(sys.z.value(1.0, res.x), e.sched.gammas[e.step]);
        // The endpoint meets both remaining lines and lies on the parent's component.
        CMat y = e.sched.stage[e.step] * sys.z.value(1.0, res.x);
        auto check = check_solution(y, {Bracket(4, {2, 4}), Bracket(4, {2, 4})}, flags);
        CHECK(check.pass);
        CHECK(xp.size() == 2);
    }
}

TEST_CASE("stay homotopy and constant systems") {
    Rng rng(3);
    auto e = four_lines_edge(Successor::Stay);
    REQUIRE(e.link.kind == LinkKind::StayHomotopy);
    CVec x0(2);
    x0 << rng.gaussian(), rng.gaussian();
    std::vector<CMat> flags;
    auto sys = edge_system(e, x0, flags, rng);
    auto res = track_path(sys, x0, TrackerSettings{});
    CHECK(res.status == PathStatus::Success);

    // Without t the tracker finishes in one step.
    auto pattern = e.link.child;
    auto z = ParamMatrix::from_pattern(pattern);
    CMat y0 = instantiate(pattern, x0);
    Bracket b(4, {2, 4});
    auto csys = randomize(schubert_equations({{b, flag_meeting(y0, rng)}, {b, flag_meeting(y0, rng)}}, z, CMat::Identity(4, 4)), 1);
    auto cres = track_path(csys, x0, TrackerSettings{});
    CHECK(cres.status == PathStatus::Success);
    CHECK(cres.steps == 1);
    CHECK((cres.x - x0).norm() < 1e-10);
}

TEST_CASE("a branch point stops the tracker") {
    BranchPoint h;
    CVec x0(1);
    x0(0) = cplx(0.0, std::sqrt(0.5));
    auto res = track_path(h, x0, TrackerSettings{});
    CHECK(res.status == PathStatus::MinStepReached);
    CHECK(res.t_reached < 0.5);
    CHECK(res.t_reached > 0.49);
}

TEST_CASE("tracking is deterministic") {
    Rng rng(4);
    auto e = four_lines_edge(Successor::Swap);
    CVec x0(2);
    x0 << rng.gaussian(), rng.gaussian();
    std::vector<CMat> flags;
    auto sys = edge_system(e, x0, flags, rng);
    auto a = track_path(sys, x0, TrackerSettings{}, true);
    auto b = track_path(sys, x0, TrackerSettings{}, true);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].t == b.trace[i].t);
        CHECK(a.trace[i].residual == b.trace[i].residual);
    }
    CHECK(a.x == b.x);
    // t never decreases along accepted steps.
    double last = 0.0;
    for (const auto& tp : a.trace)
        if (tp.accepted) {
            CHECK(tp.t > last);
            last = tp.t;
            CHECK(tp.residual <= 1e-8);
        }
}
