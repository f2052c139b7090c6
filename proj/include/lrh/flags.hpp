#pragma once

#include <cstdint>
#include <vector>

#include "lrh/linalg.hpp"

namespace lrh {

struct Flag {
    CMat basis;  // column i together with its predecessors spans F_i

    int n() const { return static_cast<int>(basis.rows()); }
    CMat span(int dim) const { return basis.leftCols(dim); }
};

// Throws NumericalDegeneracy if sigma_min/sigma_max <= 1e-10.
void check_flag(const Flag& f);

Flag identity_flag(int n);

// Stage 0 is the identity; each step s moves columns (r, r+1), r = rows[s], by
//   col_r <- gamma_s col_r + col_{r+1},  col_{r+1} <- col_r,
// so the last stage is antitriangular with ones on the antidiagonal and gammas above.
struct MovingFlagSchedule {
    int n = 0;
    std::vector<int> rows;       // critical row of each generalizing step
    std::vector<cplx> gammas;    // unit-circle constant of each step
    std::vector<CMat> stage;     // stages()+1 matrices

    int stages() const { return static_cast<int>(rows.size()); }
    const CMat& general() const { return stage.back(); }
};

MovingFlagSchedule build_schedule(int n, std::uint64_t seed);

// Generalizing step s at time t: t=0 gives stage s, t=1 gives stage s+1 exactly.
// Column r equals c(t) m_r + t m_{r+1}, c(t) = 1 + (gamma-1)t + delta t(1-t);
// delta = 0 is the default path, a nonzero delta bends it while keeping both ends.
CMat moving_flag_at(const MovingFlagSchedule& sched, int s, double t, cplx delta = 0.0);

// Generalizing step s corresponds to the checker move at game stage stages()-1-s.
inline int schedule_step_of_game_stage(int n, int game_stage) { return n * (n - 1) / 2 - 1 - game_stage; }

Flag random_flag(int n, std::uint64_t seed);

}  // namespace lrh
