#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "lrh/checkers.hpp"
#include "lrh/equations.hpp"
#include "lrh/errors.hpp"
#include "lrh/patterns.hpp"
#include "lrh/report.hpp"
#include "lrh/solver.hpp"
#include "lrh/verify.hpp"

using namespace lrh;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2 };

struct Options {
    int n = 0, k = 0;
    std::string problem;
    std::string seed = std::to_string(kDefaultSeed);
    std::string flags_path;
    double tol = 1e-8;
    int jobs = 0;
    std::string out;
    std::string format;
    int verbose = 0;
    bool wall_clock = false;
    std::string dump_equations;
    double newton_tol = 1e-8;
    int max_retries = 3;
    std::string solution_path;
};

void add_problem_options(CLI::App* app, Options& o) {
    app->add_option("-n", o.n, "ambient dimension")->required();
    app->add_option("-k", o.k, "plane dimension")->required();
    app->add_option("--problem", o.problem, "conditions, e.g. \"[2 4 6]^3 [1 3 5]\"")->required();
}

void add_output_options(CLI::App* app, Options& o, const std::string& default_format) {
    o.format = default_format;
    app->add_option("--out", o.out, "write to this file instead of standard output");
    app->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app->add_flag("-v", o.verbose, "more output; -vv adds path traces on stderr");
}

void add_solver_options(CLI::App* app, Options& o) {
    app->add_option("--seed", o.seed, "integer seed or \"random\"");
    app->add_option("--flags", o.flags_path, "target flags (JSON); solutions are moved to them by a cheater homotopy");
    app->add_option("--tol", o.tol, "verification tolerance on singular-value ratios");
    app->add_option("--jobs", o.jobs, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    app->add_option("--newton-tol", o.newton_tol, "corrector tolerance");
    app->add_option("--max-retries", o.max_retries, "retries per failed path")->check(CLI::NonNegativeNumber);
    app->add_flag("--timings", o.wall_clock, "add wall-clock seconds to the output (not reproducible)");
}

std::uint64_t parse_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text[0] == '-') throw InputError("seed must be a non-negative integer or \"random\"");
    return v;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot write " + o.out);
    f << text;
}

std::string dump_json(const Json& j) { return j.dump() + "\n"; }

SchubertProblem read_problem(const Options& o) { return parse_problem(o.problem, o.n, o.k); }

SolverSettings solver_settings(const Options& o) {
    SolverSettings s;
    s.jobs = o.jobs;
    s.max_retries = o.max_retries;
    s.tracker.newton_tol = o.newton_tol;
    s.keep_traces = o.verbose >= 2;
    return s;
}

std::string format_cplx(cplx z) {
    std::ostringstream os;
    os << std::showpos << std::scientific << std::setprecision(6) << z.real() << z.imag() << "i";
    return os.str();
}

std::string matrix_text(const CMat& m, const std::string& pad) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        os << pad;
        for (int j = 0; j < m.cols(); ++j) os << (j ? "  " : "") << format_cplx(m(i, j));
        os << "\n";
    }
    return os.str();
}

std::string solution_text(const SolutionSet& s, const ResidualReport& r, bool wall_clock) {
    std::ostringstream os;
    os << "problem " << s.problem.str() << " in G(" << s.problem.k << "," << s.problem.n << ")\n";
    os << "seed " << s.seed << "\n";
    os << "count " << s.solutions.size() << " (expected " << s.expected << ")\n";
    for (std::size_t i = 0; i < s.solutions.size(); ++i) {
        os << "solution " << i + 1 << "  max ratio " << r.solutions[i].max_ratio << "\n";
        os << matrix_text(s.solutions[i], "  ");
    }
    os << "verification " << (r.pass ? "pass" : "FAIL");
    if (r.distinct.min_distance >= 0) os << "  min distance " << r.distinct.min_distance;
    if (r.count_checked) os << "  oracle count " << r.count.expected;
    os << "\n";
    const auto& st = s.stats;
    os << "paths " << st.top_level_paths << " top-level, " << st.trajectories << " total, " << st.tracked_edges
       << " tracked segments, " << st.steps << " steps, " << st.retries << " retries, " << st.failures << " failures\n";
    if (wall_clock) os << "seconds " << st.seconds << "\n";
    return os.str();
}

// The target system on the root chart of the first game, with the seeded generic flags.
void dump_equations(const Options& o, const SchubertProblem& p, std::uint64_t seed) {
    auto conds = p.expanded();
    std::ofstream f(o.dump_equations);
    if (!f) throw InputError("cannot write " + o.dump_equations);
    if (conds.size() < 2) {
        f << "# 0 polynomials in 0 variables\n";
        return;
    }
    auto flags = generic_flags(p.n, static_cast<int>(conds.size()), seed);
    auto tree = game_tree(conds[0], conds[1]);
    auto pattern = pattern_from_board(tree.nodes[0].board);
    std::vector<std::pair<Bracket, CMat>> rest;
    for (std::size_t c = 2; c < conds.size(); ++c) rest.push_back({conds[c], flags[c]});
    std::vector<std::string> names;
    for (int v = 0; v < pattern.var_count(); ++v) names.push_back(pattern.var_name(v));
    f << "# chart\n";
    std::istringstream rows(render_pattern(pattern));
    for (std::string line; std::getline(rows, line);) f << "#   " << line << "\n";
    f << schubert_equations(rest, ParamMatrix::from_pattern(pattern), flags[1], names).dump();
}

int finish_solution(const Options& o, const SolutionSet& s) {
    auto report = verify_solutions(s.problem, s.solutions, s.flags, o.tol);
    if (o.format == "text") {
        std::string text = solution_text(s, report, o.wall_clock);
        if (o.verbose >= 1) text += "\n" + build_poset(s.problem).render();
        emit(o, text);
    } else {
        emit(o, dump_json(solution_set_json(s, report, o.tol, o.wall_clock)));
    }
    for (const auto& line : s.stats.traces) std::cerr << line << "\n";
    bool ok = report.pass && static_cast<std::int64_t>(s.solutions.size()) == s.expected;
    if (!ok) std::cerr << "lrh: verification failed\n";
    return ok ? kOk : kFailed;
}

int run_solve(const Options& o, bool require_flags) {
    auto p = read_problem(o);
    if (!p.complete())
        throw InputError("codimensions of " + p.str() + " sum to " + std::to_string(p.total_codim()) + ", not " +
                         std::to_string(p.k * (p.n - p.k)));
    if (require_flags && o.flags_path.empty()) throw InputError("cheater needs --flags");
    std::vector<CMat> targets;
    if (!o.flags_path.empty()) targets = flags_from_json(read_json_file(o.flags_path), p.n);
    const std::uint64_t seed = parse_seed(o.seed);
    if (!o.dump_equations.empty()) dump_equations(o, p, seed);
    auto settings = solver_settings(o);
    auto s = solve(p, seed, settings);
    if (!targets.empty()) {
        auto moved = cheater_to_targets(s, targets, seed, settings);
        moved.stats.seconds += s.stats.seconds;
        s = std::move(moved);
    }
    return finish_solution(o, s);
}

int run_count(const Options& o) {
    auto p = read_problem(o);
    std::int64_t count = 0;
    try {
        count = build_poset(p).count();
    } catch (const InfeasibleProblem&) {
        count = 0;
    }
    Json oracle = nullptr;
    if (p.n <= 8) oracle = oracle_count(p.expanded());
    if (o.format == "text") {
        std::ostringstream os;
        os << count << "\n";
        if (o.verbose >= 1) os << "oracle " << (oracle.is_null() ? std::string("n/a") : oracle.dump()) << "\n";
        emit(o, os.str());
    } else {
        emit(o, dump_json({{"problem", problem_json(p)}, {"count", count}, {"oracle", oracle}}));
    }
    if (!oracle.is_null() && oracle.get<std::int64_t>() != count) {
        std::cerr << "lrh: poset count " << count << " disagrees with the tableau count " << oracle << "\n";
        return kFailed;
    }
    return count > 0 ? kOk : kFailed;
}

int run_game(const Options& o) {
    auto p = read_problem(o);
    auto conds = p.expanded();
    if (conds.size() != 2) throw InputError("game needs exactly two brackets");
    auto tree = game_tree(conds[0], conds[1]);
    if (o.format == "text") {
        std::string text = render_game(tree);
        if (o.verbose >= 1) {
            text += "\nroot pattern\n" + render_pattern(pattern_from_board(tree.nodes[0].board));
            for (int leaf : tree.leaves)
                text += "\nleaf " + tree.leaf_bracket(leaf).str() + "\n" + render_pattern(pattern_from_board(tree.nodes[leaf].board));
        }
        emit(o, text);
    } else {
        Json leaves = Json::array();
        for (const auto& [b, m] : tree.multiplicities) leaves.push_back({{"bracket", b.e}, {"multiplicity", m}});
        emit(o, dump_json({{"omega", conds[0].e}, {"tau", conds[1].e}, {"nodes", tree.nodes.size()}, {"leaves", leaves}}));
    }
    return kOk;
}

int run_poset(const Options& o) {
    auto poset = build_poset(read_problem(o));
    if (o.format == "text") {
        emit(o, poset.render());
        return kOk;
    }
    Json levels = Json::array();
    for (const auto& level : poset.levels) {
        Json nodes = Json::array();
        for (int v : level) {
            const auto& nd = poset.nodes[v];
            Json children = Json::array();
            for (const auto& [c, m] : nd.children) children.push_back({{"bracket", poset.nodes[c].bracket.e}, {"multiplicity", m}});
            nodes.push_back({{"bracket", nd.bracket.e},
                             {"solutions", nd.solutions},
                             {"coefficient", nd.coefficient},
                             {"children", children}});
        }
        levels.push_back(nodes);
    }
    emit(o, dump_json({{"count", poset.count()}, {"levels", levels}, {"expansions", poset.expansions()}}));
    return kOk;
}

int run_verify(const Options& o) {
    auto file = solution_file_from_json(read_json_file(o.solution_path));
    if (!o.flags_path.empty()) file.flags = flags_from_json(read_json_file(o.flags_path), file.problem.n);
    if (file.flags.size() != file.problem.expanded().size())
        throw InputError("expected one flag per condition, got " + std::to_string(file.flags.size()));
    auto report = verify_solutions(file.problem, file.solutions, file.flags, o.tol);
    if (o.format == "text") {
        std::ostringstream os;
        os << "problem " << file.problem.str() << "\n";
        for (std::size_t i = 0; i < report.solutions.size(); ++i)
            os << "solution " << i + 1 << "  max ratio " << report.solutions[i].max_ratio
               << (report.solutions[i].pass ? "  pass" : "  FAIL") << "\n";
        if (report.distinct.min_distance >= 0) os << "min distance " << report.distinct.min_distance << "\n";
        if (report.count_checked) os << "count " << report.count.observed << " expected " << report.count.expected << "\n";
        os << (report.pass ? "pass" : "FAIL") << "\n";
        emit(o, os.str());
    } else {
        emit(o, dump_json({{"problem", problem_json(file.problem)},
                           {"count", file.solutions.size()},
                           {"verification", verification_json(report, o.tol)}}));
    }
    return report.pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Littlewood-Richardson homotopy for Schubert problems"};
    app.require_subcommand(1);
    Options solve_o, cheater_o, count_o, game_o, poset_o, verify_o;

    auto* solve_cmd = app.add_subcommand("solve", "solve a Schubert problem and verify the solutions");
    add_problem_options(solve_cmd, solve_o);
    add_solver_options(solve_cmd, solve_o);
    add_output_options(solve_cmd, solve_o, "json");
    solve_cmd->add_option("--dump-equations", solve_o.dump_equations, "write the target polynomial system to this file");

    auto* cheater_cmd = app.add_subcommand("cheater", "solve, then move the solutions to the flags given by --flags");
    add_problem_options(cheater_cmd, cheater_o);
    add_solver_options(cheater_cmd, cheater_o);
    add_output_options(cheater_cmd, cheater_o, "json");

    auto* count_cmd = app.add_subcommand("count", "count solutions combinatorially");
    add_problem_options(count_cmd, count_o);
    add_output_options(count_cmd, count_o, "json");

    auto* game_cmd = app.add_subcommand("game", "print the checker game of two brackets");
    add_problem_options(game_cmd, game_o);
    add_output_options(game_cmd, game_o, "text");

    auto* poset_cmd = app.add_subcommand("poset", "print the resolution poset");
    add_problem_options(poset_cmd, poset_o);
    add_output_options(poset_cmd, poset_o, "text");

    auto* verify_cmd = app.add_subcommand("verify", "re-check a solution file written by solve");
    verify_cmd->add_option("file", verify_o.solution_path, "solution JSON")->required();
    verify_cmd->add_option("--flags", verify_o.flags_path, "check against these flags instead of the file's");
    verify_cmd->add_option("--tol", verify_o.tol, "tolerance on singular-value ratios");
    add_output_options(verify_cmd, verify_o, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (*solve_cmd) return run_solve(solve_o, false);
        if (*cheater_cmd) return run_solve(cheater_o, true);
        if (*count_cmd) return run_count(count_o);
        if (*game_cmd) return run_game(game_o);
        if (*poset_cmd) return run_poset(poset_o);
        if (*verify_cmd) return run_verify(verify_o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "lrh: " << e.what() << "\n";
        return kBadInput;
    } catch (const InfeasibleProblem& e) {
        std::cerr << "lrh: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "lrh: " << e.what() << "\n";
        return kFailed;
    }
    return kBadInput;
}
