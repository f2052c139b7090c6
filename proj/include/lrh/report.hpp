#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lrh/solver.hpp"
#include "lrh/verify.hpp"

namespace lrh {

using Json = nlohmann::json;

// Rows of [re, im] pairs.
Json matrix_json(const CMat& m);

// Accepts nested rows or a flat row-major list of [re, im] pairs (a bare number is a real entry).
// Throws InputError on any shape or type mismatch.
CMat matrix_from_json(const Json& j, int rows, int cols);

// {"flags": [...]} or a top-level array of n x n matrices.
std::vector<CMat> flags_from_json(const Json& j, int n);

Json problem_json(const SchubertProblem& p);
Json counters_json(const SolverStats& s, bool wall_clock);
Json verification_json(const ResidualReport& r, double tol);

// Keys: problem, seed, count, expected, solutions, residuals, flags, timings, verification.
// Everything is a function of the inputs and the seed unless wall_clock is set.
Json solution_set_json(const SolutionSet& s, const ResidualReport& r, double tol, bool wall_clock = false);

struct SolutionFile {
    SchubertProblem problem;
    std::vector<CMat> flags;
    std::vector<CMat> solutions;
};

// Reads the output of solution_set_json back.
SolutionFile solution_file_from_json(const Json& j);

}  // namespace lrh
