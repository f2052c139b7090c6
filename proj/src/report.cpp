#include "lrh/report.hpp"

#include <algorithm>

#include "lrh/errors.hpp"

namespace lrh {

namespace {

cplx entry_from_json(const Json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw InputError("matrix entry must be [re, im] or a number, got " + e.dump());
}

bool is_entry(const Json& e) { return e.is_number() || (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()); }

}  // namespace

Json matrix_json(const CMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMat matrix_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array()) throw InputError("matrix must be a JSON array");
    CMat m(rows, cols);
    const std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
    const bool flat = j.size() == static_cast<std::size_t>(rows * cols) && std::all_of(j.begin(), j.end(), is_entry);
    if (flat) {
        for (int i = 0; i < rows; ++i)
            for (int c = 0; c < cols; ++c) m(i, c) = entry_from_json(j[i * cols + c]);
        return m;
    }
    if (j.size() != static_cast<std::size_t>(rows)) throw InputError("matrix must be " + shape);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j[i];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) throw InputError("matrix must be " + shape);
        for (int c = 0; c < cols; ++c) m(i, c) = entry_from_json(row[c]);
    }
    return m;
}

std::vector<CMat> flags_from_json(const Json& j, int n) {
    const Json& list = j.is_object() ? j.value("flags", Json()) : j;
    if (!list.is_array()) throw InputError("flags file must be an array of matrices or {\"flags\": [...]}");
    std::vector<CMat> out;
    for (const auto& f : list) out.push_back(matrix_from_json(f, n, n));
    return out;
}

Json problem_json(const SchubertProblem& p) {
    Json conds = Json::array();
    for (const auto& c : p.conditions) conds.push_back({{"bracket", c.bracket.e}, {"multiplicity", c.multiplicity}});
    return {{"n", p.n}, {"k", p.k}, {"text", p.str()}, {"conditions", conds}};
}

Json counters_json(const SolverStats& s, bool wall_clock) {
    Json j = {{"top_level_paths", s.top_level_paths},
              {"trajectories", s.trajectories},
              {"tracked_edges", s.tracked_edges},
              {"coordinate_changes", s.coordinate_changes},
              {"steps", s.steps},
              {"rejected_steps", s.rejected_steps},
              {"newton_iterations", s.newton_iterations},
              {"retries", s.retries},
              {"failures", s.failures}};
    if (wall_clock) j["seconds"] = s.seconds;
    return j;
}

Json verification_json(const ResidualReport& r, double tol) {
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back({{"max_ratio", s.max_ratio}, {"pass", s.pass}});
    Json collisions = Json::array();
    for (const auto& [a, b] : r.distinct.collisions) collisions.push_back({a, b});
    Json j = {{"pass", r.pass},
              {"tolerance", tol},
              {"solutions", sols},
              {"min_distance", r.distinct.min_distance},
              {"collisions", collisions}};
    if (r.count_checked)
        j["count"] = {{"expected", r.count.expected}, {"observed", r.count.observed}, {"pass", r.count.pass}};
    else
        j["count"] = nullptr;
    return j;
}

Json solution_set_json(const SolutionSet& s, const ResidualReport& r, double tol, bool wall_clock) {
    Json sols = Json::array(), residuals = Json::array(), flags = Json::array();
    for (const auto& y : s.solutions) sols.push_back(matrix_json(y));
    for (const auto& c : r.solutions) residuals.push_back(c.max_ratio);
    for (const auto& f : s.flags) flags.push_back(matrix_json(f));
    return {{"problem", problem_json(s.problem)},
            {"seed", s.seed},
            {"count", s.solutions.size()},
            {"expected", s.expected},
            {"solutions", sols},
            {"residuals", residuals},
            {"flags", flags},
            {"timings", counters_json(s.stats, wall_clock)},
            {"verification", verification_json(r, tol)}};
}

SolutionFile solution_file_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("solution file must be a JSON object");
    SolutionFile f;
    try {
        const Json& p = j.at("problem");
        f.problem = parse_problem(p.at("text").get<std::string>(), p.at("n").get<int>(), p.at("k").get<int>());
        f.flags = flags_from_json(j.at("flags"), f.problem.n);
        for (const auto& y : j.at("solutions")) f.solutions.push_back(matrix_from_json(y, f.problem.n, f.problem.k));
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed solution file: ") + e.what());
    }
    return f;
}

}  // namespace lrh
