#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lrh/combinatorics.hpp"
#include "lrh/linalg.hpp"

namespace lrh {

struct ConditionCheck {
    int condition = 0;      // index into the expanded condition list
    int entry = 0;          // i, 1-based
    int required_rank = 0;  // k + omega_i - i
    double ratio = 0.0;     // sigma_{rank+1} / sigma_1 of [X | F_omega_i], both orthonormalized
    bool pass = false;
};

struct SolutionCheck {
    std::vector<ConditionCheck> entries;
    double max_ratio = 0.0;
    bool pass = true;
};

SolutionCheck check_solution(const CMat& x, const std::vector<Bracket>& conditions, const std::vector<CMat>& flags,
                             double tol = 1e-8);

struct DistinctnessReport {
    double min_distance = -1.0;  // -1 when fewer than two solutions
    std::vector<std::pair<int, int>> collisions;
};

DistinctnessReport distinctness(const std::vector<CMat>& solutions, double tol = 1e-6);

// Count by iterated tableau-oracle products. Throws OracleTooLarge for n > 8.
std::int64_t oracle_count(const std::vector<Bracket>& conditions);

struct CountCheck {
    std::int64_t expected = 0;
    std::int64_t observed = 0;
    bool pass = false;
};

CountCheck count_check(const SchubertProblem& problem, std::int64_t observed);

struct ResidualReport {
    std::vector<SolutionCheck> solutions;
    DistinctnessReport distinct;
    bool count_checked = false;
    CountCheck count;
    bool pass = false;
};

// Full report: residuals of every solution, distinctness and (for n <= 8) the oracle count.
ResidualReport verify_solutions(const SchubertProblem& problem, const std::vector<CMat>& solutions,
                                const std::vector<CMat>& flags, double tol = 1e-8, double distinct_tol = 1e-6);

}  // namespace lrh
