#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrh/checkers.hpp"
#include "lrh/combinatorics.hpp"
#include "lrh/flags.hpp"
#include "lrh/tracking.hpp"

namespace lrh {

struct PosetNode {
    Bracket bracket;
    int level = 0;
    std::int64_t solutions = 0;    // k-planes this node contributes, counted bottom up
    std::int64_t coefficient = 0;  // coefficient in the expansion at its level, counted top down
    std::vector<std::pair<int, std::int64_t>> children;  // (node, multiplicity)
};

// Level l holds the classes of the intersection of the first l+1 conditions; the last level
// holds only [1 2 ... k].
struct ResolutionPoset {
    int n = 0, k = 0;
    std::vector<Bracket> conditions;        // expanded, in processing order
    std::vector<PosetNode> nodes;           // nodes[0] is the root
    std::vector<std::vector<int>> levels;   // node indices, brackets decreasing

    std::int64_t count() const { return nodes.empty() ? 0 : nodes[0].solutions; }
    int find(int level, const Bracket& b) const;  // -1 if absent
    // "(1[2 3 5]+1[1 4 5]+1[1 3 6])[2 5 6]^2" for each level below the root.
    std::vector<std::string> expansions() const;
    std::string render() const;
};

// Throws InfeasibleProblem when the count is zero.
ResolutionPoset build_poset(const SchubertProblem& problem);

// The k-plane spanned by F_{omega_i} cap M_{n+1-omega_i}, when tau is the dual of omega.
std::optional<CMat> start_solutions(const Bracket& omega, const CMat& f, const Bracket& tau, const CMat& m);

struct SolverSettings {
    TrackerSettings tracker;
    int jobs = 0;  // 0: hardware concurrency
    int max_retries = 3;
    double fit_tol = 1e-8;
    bool keep_traces = false;
};

struct SolverStats {
    std::int64_t top_level_paths = 0;  // trajectories tracked into the root
    std::int64_t trajectories = 0;     // over all levels
    std::int64_t tracked_edges = 0;    // path segments handed to the tracker
    std::int64_t coordinate_changes = 0;
    std::int64_t steps = 0;
    std::int64_t rejected_steps = 0;
    std::int64_t newton_iterations = 0;
    std::int64_t retries = 0;
    std::int64_t failures = 0;
    double seconds = 0.0;
    std::vector<std::string> traces;  // one line per tracked segment when requested
};

struct SolutionSet {
    SchubertProblem problem;
    std::vector<Bracket> conditions;  // expanded
    std::vector<CMat> flags;          // one per condition; flags[0] is the identity
    std::uint64_t seed = 0;
    std::vector<CMat> solutions;      // n x k, canonical order
    std::int64_t expected = 0;        // poset count
    SolverStats stats;
};

// Flags used by solve for the given seed: identity, then the general matrix of one schedule per
// further condition.
std::vector<CMat> generic_flags(int n, int conditions, std::uint64_t seed);
MovingFlagSchedule level_schedule(int n, int level, std::uint64_t seed);

SolutionSet solve(const SchubertProblem& problem, std::uint64_t seed, const SolverSettings& settings = {});

// Moves every solution from solved.flags to the target flags along (1-t) F + t gamma G.
// Solutions whose path fails are dropped and counted in stats.failures.
SolutionSet cheater_to_targets(const SolutionSet& solved, const std::vector<CMat>& targets, std::uint64_t seed,
                               const SolverSettings& settings = {});

}  // namespace lrh
