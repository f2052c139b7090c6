#include "lrh/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "lrh/equations.hpp"
#include "lrh/errors.hpp"
#include "lrh/patterns.hpp"

namespace lrh {

// ---------------------------------------------------------------- poset

int ResolutionPoset::find(int level, const Bracket& b) const {
    if (level < 0 || level >= static_cast<int>(levels.size())) return -1;
    for (int id : levels[level])
        if (nodes[id].bracket == b) return id;
    return -1;
}

namespace {

std::string remaining_product(const std::vector<Bracket>& conds, std::size_t from) {
    std::string out;
    for (std::size_t j = from; j < conds.size();) {
        std::size_t e = j;
        while (e < conds.size() && conds[e] == conds[j]) ++e;
        out += conds[j].str();
        if (e - j > 1) out += "^" + std::to_string(e - j);
        j = e;
    }
    return out;
}

}  // namespace

std::vector<std::string> ResolutionPoset::expansions() const {
    std::vector<std::string> out;
    for (std::size_t l = 1; l < levels.size(); ++l) {
        std::string sum;
        int terms = 0;
        for (int id : levels[l]) {
            if (nodes[id].coefficient == 0) continue;
            if (terms++) sum += "+";
            sum += std::to_string(nodes[id].coefficient) + nodes[id].bracket.str();
        }
        if (terms == 0) sum = "0";
        std::string rest = remaining_product(conditions, l + 1);
        if (!rest.empty() && terms > 1) sum = "(" + sum + ")";
        out.push_back(sum + rest);
    }
    return out;
}

std::string ResolutionPoset::render() const {
    std::ostringstream os;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        os << "level " << l;
        if (l < conditions.size()) os << "  (after " << conditions[l].str() << ")";
        os << '\n';
        for (int id : levels[l]) {
            const auto& node = nodes[id];
            os << "  " << node.bracket.str() << " (" << node.solutions << ")";
            if (!node.children.empty()) {
                os << " ->";
                for (std::size_t c = 0; c < node.children.size(); ++c) {
                    os << (c ? ", " : " ") << nodes[node.children[c].first].bracket.str();
                    if (node.children[c].second != 1) os << " x" << node.children[c].second;
                }
            }
            os << '\n';
        }
    }
    if (!conditions.empty()) {
        os << remaining_product(conditions, 0);
        for (const auto& e : expansions()) os << "\n  = " << e;
        os << '\n';
    }
    return os.str();
}

ResolutionPoset build_poset(const SchubertProblem& problem) {
    if (!problem.complete())
        throw InputError("codimensions of " + problem.str() + " sum to " + std::to_string(problem.total_codim()) +
                         ", not " + std::to_string(problem.k * (problem.n - problem.k)));
    ResolutionPoset P;
    P.n = problem.n;
    P.k = problem.k;
    P.conditions = problem.expanded();
    const int s = static_cast<int>(P.conditions.size());
    const Bracket bottom = bottom_bracket(P.n, P.k);
    std::map<std::pair<Bracket, Bracket>, std::map<Bracket, std::int64_t>> memo;

    P.nodes.push_back({P.conditions[0], 0, 0, 1, {}});
    P.levels.push_back({0});
    for (int l = 0; l + 1 < s; ++l) {
        std::map<Bracket, std::vector<std::pair<int, std::int64_t>>> incoming;
        for (int id : P.levels[l]) {
            auto key = std::make_pair(P.nodes[id].bracket, P.conditions[l + 1]);
            auto it = memo.find(key);
            if (it == memo.end()) {
                std::map<Bracket, std::int64_t> m;
                try {
                    m = game_multiplicities(key.first, key.second);
                } catch (const EmptyIntersection&) {
                }
                it = memo.emplace(key, std::move(m)).first;
            }
            for (const auto& [b, mult] : it->second) {
                if (l + 1 == s - 1 && b != bottom) continue;
                incoming[b].push_back({id, mult});
            }
        }
        std::vector<int> level;
        for (auto it = incoming.rbegin(); it != incoming.rend(); ++it) {
            int id = static_cast<int>(P.nodes.size());
            P.nodes.push_back({it->first, l + 1, 0, 0, {}});
            level.push_back(id);
            for (const auto& [parent, mult] : it->second) P.nodes[parent].children.push_back({id, mult});
        }
        P.levels.push_back(level);
    }
    // Children in decreasing bracket order, matching the level order.
    for (auto& node : P.nodes)
        std::sort(node.children.begin(), node.children.end(),
                  [&](const auto& a, const auto& b) { return P.nodes[a.first].bracket > P.nodes[b.first].bracket; });
    for (int l = s - 1; l >= 0; --l)
        for (int id : P.levels[l]) {
            auto& node = P.nodes[id];
            if (l == s - 1) {
                node.solutions = node.bracket == bottom ? 1 : 0;
                continue;
            }
            for (const auto& [c, m] : node.children) node.solutions += m * P.nodes[c].solutions;
        }
    for (int l = 0; l + 1 < s; ++l)
        for (int id : P.levels[l])
            for (const auto& [c, m] : P.nodes[id].children) P.nodes[c].coefficient += P.nodes[id].coefficient * m;
    if (P.count() == 0) throw InfeasibleProblem(problem.str() + " has no solutions");
    return P;
}

// ---------------------------------------------------------------- start solutions and flags

std::optional<CMat> start_solutions(const Bracket& omega, const CMat& f, const Bracket& tau, const CMat& m) {
    if (tau != dual(omega)) return std::nullopt;
    const int n = omega.n, k = omega.k;
    CMat y(n, k);
    for (int i = 0; i < k; ++i) {
        const int a = omega.e[i], b = n + 1 - omega.e[i];
        CMat stacked(n, a + b);
        stacked << f.leftCols(a), -m.leftCols(b);
        Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s(n - 1) <= 1e-10 * s(0))
            throw NumericalDegeneracy("F_" + std::to_string(a) + " and M_" + std::to_string(b) +
                                      " do not meet in a line");
        CVec v = svd.matrixV().col(a + b - 1);
        CVec x = f.leftCols(a) * v.head(a);
        y.col(i) = x / x.norm();
    }
    if (singular_ratio(y) <= 1e-10) throw NumericalDegeneracy("start plane is not k-dimensional");
    return y;
}

MovingFlagSchedule level_schedule(int n, int condition, std::uint64_t seed) {
    return build_schedule(n, derive_seed(seed, {0x5c4edu, static_cast<std::uint64_t>(condition)}));
}

std::vector<CMat> generic_flags(int n, int conditions, std::uint64_t seed) {
    std::vector<CMat> flags{CMat::Identity(n, n)};
    for (int c = 1; c < conditions; ++c) flags.push_back(level_schedule(n, c, seed).general());
    return flags;
}

// ---------------------------------------------------------------- solve

namespace {

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

// Endpoints of the randomized system must also solve the full system.
constexpr double kOnVarietyTol = 1e-6;

std::uint64_t bracket_tag(const Bracket& b) {
    std::uint64_t h = 1469598103934665603ull;
    for (int e : b.e) h = (h ^ static_cast<std::uint64_t>(e)) * 1099511628211ull;
    return h;
}

struct TrajectoryStats {
    std::int64_t tracked = 0, renames = 0, steps = 0, rejected = 0, newton = 0, retries = 0;
    std::vector<std::string> traces;
};

struct Trajectory {
    int leaf = 0;
    CMat start;
    std::optional<CMat> end;
    CVec root_x;
    TrajectoryStats stats;
};

class Solver {
public:
    Solver(const SchubertProblem& problem, std::uint64_t seed, const SolverSettings& settings)
        : problem_(problem), settings_(settings), seed_(seed), poset_(build_poset(problem)) {
        settings_.tracker.validate();
        conds_ = poset_.conditions;
        n_ = problem.n;
        k_ = problem.k;
        flags_ = generic_flags(n_, static_cast<int>(conds_.size()), seed);
        for (std::size_t c = 0; c < conds_.size(); ++c)
            schedules_.push_back(c == 0 ? MovingFlagSchedule{} : level_schedule(n_, static_cast<int>(c), seed));
    }

    SolutionSet run() {
        auto t0 = std::chrono::steady_clock::now();
        SolutionSet out;
        out.problem = problem_;
        out.conditions = conds_;
        out.flags = flags_;
        out.seed = seed_;
        out.expected = poset_.count();
        auto ys = solve_node(0, conds_[0], true);
        out.solutions = canonical_order(ys);
        stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.stats = stats_;
        return out;
    }

private:
    int s() const { return static_cast<int>(conds_.size()); }

    std::vector<std::pair<Bracket, CMat>> remaining(int level) const {
        std::vector<std::pair<Bracket, CMat>> r;
        for (int j = level + 2; j < s(); ++j) r.push_back({conds_[j], flags_[j]});
        return r;
    }

    std::vector<CMat> solve_node(int level, const Bracket& sigma, bool top) {
        auto key = std::make_pair(level, sigma);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<CMat> result;
        int node = poset_.find(level, sigma);
        if (node >= 0 && poset_.nodes[node].solutions > 0) {
            if (level == s() - 1) {
                result.push_back(CMat::Identity(n_, k_));
            } else if (level == s() - 2) {
                auto y = start_solutions(sigma, flags_[0], conds_[s() - 1], flags_[s() - 1]);
                if (y) result.push_back(*y);
            } else {
                result = track_game(level, sigma, top);
            }
        }
        memo_[key] = result;
        return result;
    }

    std::vector<CMat> track_game(int level, const Bracket& sigma, bool top) {
        const GameTree tree = game_tree(sigma, conds_[level + 1]);
        const MovingFlagSchedule& sched = schedules_[level + 1];
        const int N = sched.stages();
        const auto rest = remaining(level);

        std::vector<Trajectory> trajs;
        for (int leaf : tree.leaves)
            for (const auto& y : solve_node(level + 1, tree.leaf_bracket(leaf), false)) trajs.push_back({leaf, y, {}, {}, {}});

        // Links and shared systems along the paths in use.
        std::map<int, StageLink> links;
        std::map<int, MinorSystem> systems;
        for (const auto& tr : trajs)
            for (int v = tr.leaf; tree.nodes[v].parent >= 0; v = tree.nodes[v].parent) {
                if (links.count(v)) break;
                const auto& nd = tree.nodes[v];
                links.emplace(v, link_stages(tree.nodes[nd.parent].board, nd.board, nd.kind));
            }
        std::vector<int> tracked_nodes;
        for (const auto& [v, link] : links)
            if (link.tracked()) tracked_nodes.push_back(v);
        std::vector<MinorSystem> built(tracked_nodes.size());
        parallel_for(static_cast<int>(tracked_nodes.size()), settings_.jobs,
                     [&](int i) { built[i] = edge_system(level, sigma, tree, links.at(tracked_nodes[i]), tracked_nodes[i], 0, rest); });
        for (std::size_t i = 0; i < tracked_nodes.size(); ++i) systems.emplace(tracked_nodes[i], std::move(built[i]));

        const LocalizationPattern root_pattern = pattern_from_board(tree.nodes[0].board);
        MinorSystem root_sys;
        if (!rest.empty())
            root_sys = randomize(schubert_equations(rest, ParamMatrix::from_pattern(root_pattern), sched.general()),
                                 derive_seed(seed_, {0x9001u, static_cast<std::uint64_t>(level), bracket_tag(sigma)}));

        auto run_one = [&](Trajectory& tr, int attempt_base) {
            tr.stats = {};
            tr.end.reset();
            try {
                CVec x = fit_pattern(tr.start, pattern_from_board(tree.nodes[tr.leaf].board), settings_.fit_tol);
                for (int v = tr.leaf; tree.nodes[v].parent >= 0; v = tree.nodes[v].parent) {
                    const StageLink& link = links.at(v);
                    const int step = N - 1 - tree.nodes[tree.nodes[v].parent].board.stage;
                    const cplx gamma = sched.gammas[step];
                    if (!link.tracked()) {
                        x = link.to_parent(instantiate(link.child, x), gamma, settings_.fit_tol);
                        ++tr.stats.renames;
                        continue;
                    }
                    bool ok = false;
                    for (int attempt = attempt_base; attempt <= attempt_base + settings_.max_retries && !ok; ++attempt) {
                        MinorSystem local;
                        const MinorSystem* sys = &systems.at(v);
                        if (attempt > 0) {
                            local = edge_system(level, sigma, tree, link, v, attempt, rest);
                            sys = &local;
                            ++tr.stats.retries;
                        }
                        auto res = track_path(*sys, x, settings_.tracker, settings_.keep_traces);
                        ++tr.stats.tracked;
                        tr.stats.steps += res.steps;
                        tr.stats.rejected += res.rejected;
                        tr.stats.newton += res.newton_iterations;
                        if (settings_.keep_traces) {
                            std::ostringstream os;
                            os << "level " << level << ' ' << sigma.str() << " stage " << tree.nodes[v].board.stage - 1 << ' '
                               << link_kind_name(link.kind) << " attempt " << attempt << ": "
                               << path_status_name(res.status) << " steps " << res.steps << " rejected " << res.rejected;
                            for (const auto& tp : res.trace)
                                os << "\n    t=" << tp.t << " h=" << tp.step << (tp.accepted ? " ok" : " rejected");
                            tr.stats.traces.push_back(os.str());
                        }
                        if (res.status != PathStatus::Success) continue;
                        if (sys->unrandomized_residual(1.0, res.x) > kOnVarietyTol) continue;
                        try {
                            x = link.to_parent(sys->z.value(1.0, res.x), gamma, settings_.fit_tol);
                            ok = true;
                        } catch (const PatternMismatch&) {
                        }
                    }
                    if (!ok) return;
                }
                if (root_sys.q() > 0) {
                    x = polish_point(root_sys, 0.0, x);
                    if (root_sys.unrandomized_residual(0.0, x) > kOnVarietyTol) return;
                }
                tr.root_x = x;
                tr.end = sched.general() * instantiate(root_pattern, x);
            } catch (const PatternMismatch&) {
            } catch (const NumericalDegeneracy&) {
            }
        };

        parallel_for(static_cast<int>(trajs.size()), settings_.jobs, [&](int i) { run_one(trajs[i], 0); });

        // Two trajectories landing on the same plane means one of them jumped paths. Either may be
        // the culprit, so both are redone along bent paths.
        for (int round = 1; round <= settings_.max_retries; ++round) {
            std::vector<int> redo;
            std::vector<char> mark(trajs.size(), 0);
            for (std::size_t b = 0; b < trajs.size(); ++b) {
                if (!trajs[b].end) continue;
                for (std::size_t a = 0; a < b; ++a)
                    if (trajs[a].end && grassmann_distance(*trajs[a].end, *trajs[b].end) <= 1e-6) mark[a] = mark[b] = 1;
            }
            for (std::size_t b = 0; b < trajs.size(); ++b)
                if (mark[b]) redo.push_back(static_cast<int>(b));
            if (redo.empty()) break;
            parallel_for(static_cast<int>(redo.size()), settings_.jobs, [&](int i) { run_one(trajs[redo[i]], round); });
            stats_.retries += static_cast<std::int64_t>(redo.size());
        }

        std::vector<CMat> out;
        for (std::size_t b = 0; b < trajs.size(); ++b) {
            auto& tr = trajs[b];
            stats_.tracked_edges += tr.stats.tracked;
            stats_.coordinate_changes += tr.stats.renames;
            stats_.steps += tr.stats.steps;
            stats_.rejected_steps += tr.stats.rejected;
            stats_.newton_iterations += tr.stats.newton;
            stats_.retries += tr.stats.retries;
            for (auto& line : tr.stats.traces) stats_.traces.push_back(std::move(line));
            ++stats_.trajectories;
            if (top) ++stats_.top_level_paths;
            bool dup = false;
            for (const auto& y : out)
                if (tr.end && grassmann_distance(y, *tr.end) <= 1e-6) dup = true;
            if (!tr.end || dup) {
                ++stats_.failures;
                continue;
            }
            out.push_back(*tr.end);
        }
        return out;
    }

    MinorSystem edge_system(int level, const Bracket& sigma, const GameTree& tree, const StageLink& link, int node,
                            int attempt, const std::vector<std::pair<Bracket, CMat>>& rest) const {
        const MovingFlagSchedule& sched = schedules_[level + 1];
        const int step = sched.stages() - 1 - tree.nodes[tree.nodes[node].parent].board.stage;
        std::uint64_t tag = derive_seed(seed_, {0xed9eu, static_cast<std::uint64_t>(level), bracket_tag(sigma),
                                                static_cast<std::uint64_t>(node), static_cast<std::uint64_t>(attempt)});
        cplx delta = 0.0;
        if (attempt > 0) {
            Rng rng(derive_seed(tag, {1}));
            delta = rng.unit_circle();
        }
        auto fam = link.family(sched.gammas[step], delta);
        return randomize(schubert_equations(rest, fam, sched.stage[step]), derive_seed(tag, {2}));
    }

    std::vector<CMat> canonical_order(const std::vector<CMat>& ys) const {
        if (ys.size() < 2) return ys;
        // Coordinates in the root chart of the first level.
        std::vector<std::pair<std::vector<double>, int>> keyed;
        GameTree tree = game_tree(conds_[0], conds_[1]);
        auto root = pattern_from_board(tree.nodes[0].board);
        CMat finv = flags_[1].inverse();
        for (std::size_t i = 0; i < ys.size(); ++i) {
            std::vector<double> key;
            try {
                CVec x = fit_pattern(finv * ys[i], root, settings_.fit_tol);
                for (int v = 0; v < x.size(); ++v) key.push_back(std::round(x(v).real() * 1e6) / 1e6);
                for (int v = 0; v < x.size(); ++v) key.push_back(std::round(x(v).imag() * 1e6) / 1e6);
            } catch (const PatternMismatch&) {
                key.assign(1, HUGE_VAL);
            }
            keyed.push_back({key, static_cast<int>(i)});
        }
        std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<CMat> out;
        for (const auto& [key, i] : keyed) out.push_back(ys[i]);
        return out;
    }

    SchubertProblem problem_;
    SolverSettings settings_;
    std::uint64_t seed_;
    ResolutionPoset poset_;
    std::vector<Bracket> conds_;
    int n_ = 0, k_ = 0;
    std::vector<CMat> flags_;
    std::vector<MovingFlagSchedule> schedules_;
    std::map<std::pair<int, Bracket>, std::vector<CMat>> memo_;
    SolverStats stats_;
};

}  // namespace

SolutionSet solve(const SchubertProblem& problem, std::uint64_t seed, const SolverSettings& settings) {
    return Solver(problem, seed, settings).run();
}

// ---------------------------------------------------------------- cheater

SolutionSet cheater_to_targets(const SolutionSet& solved, const std::vector<CMat>& targets, std::uint64_t seed,
                               const SolverSettings& settings) {
    settings.tracker.validate();
    const int n = solved.problem.n;
    if (targets.size() != solved.conditions.size())
        throw InputError("expected " + std::to_string(solved.conditions.size()) + " target flags, got " +
                         std::to_string(targets.size()));
    for (const auto& g : targets) {
        if (g.rows() != n || g.cols() != n) throw InputError("target flags must be " + std::to_string(n) + " x " + std::to_string(n));
        check_flag(Flag{g});
    }
    auto t0 = std::chrono::steady_clock::now();
    auto make = [&](int attempt) {
        Rng rng(derive_seed(seed, {0xc4ea7u, static_cast<std::uint64_t>(attempt)}));
        cplx gamma = rng.unit_circle();
        CMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
        Eigen::HouseholderQR<CMat> qr(g);
        CMat u = qr.householderQ() * CMat::Identity(n, n);
        return FlagHomotopySystem(solved.conditions, solved.flags, targets, gamma, u, derive_seed(seed, {0xc4ea7u, 7, static_cast<std::uint64_t>(attempt)}));
    };
    const FlagHomotopySystem base = make(0);
    struct Item {
        std::optional<CMat> end;
        TrajectoryStats stats;
    };
    std::vector<Item> items(solved.solutions.size());
    parallel_for(static_cast<int>(items.size()), settings.jobs, [&](int i) {
        for (int attempt = 0; attempt <= settings.max_retries; ++attempt) {
            std::optional<FlagHomotopySystem> local;
            const FlagHomotopySystem* sys = &base;
            if (attempt > 0) {
                local.emplace(make(attempt));
                sys = &*local;
                ++items[i].stats.retries;
            }
            try {
                CVec x0 = sys->coordinates(solved.solutions[i]);
                auto res = track_path(*sys, x0, settings.tracker);
                ++items[i].stats.tracked;
                items[i].stats.steps += res.steps;
                items[i].stats.rejected += res.rejected;
                items[i].stats.newton += res.newton_iterations;
                if (res.status != PathStatus::Success) continue;
                CMat y = sys->plane(polish_point(*sys, 1.0, res.x));
                items[i].end = orthonormal_basis(y);
                return;
            } catch (const PatternMismatch&) {
            }
        }
    });
    SolutionSet out = solved;
    out.flags = targets;
    out.seed = seed;
    out.solutions.clear();
    out.stats = {};
    std::vector<std::pair<std::vector<double>, CMat>> keyed;
    for (auto& it : items) {
        out.stats.tracked_edges += it.stats.tracked;
        out.stats.steps += it.stats.steps;
        out.stats.rejected_steps += it.stats.rejected;
        out.stats.newton_iterations += it.stats.newton;
        out.stats.retries += it.stats.retries;
        ++out.stats.trajectories;
        ++out.stats.top_level_paths;
        if (!it.end) {
            ++out.stats.failures;
            continue;
        }
        std::vector<double> key;
        try {
            CVec x = base.coordinates(*it.end);
            for (int v = 0; v < x.size(); ++v) key.push_back(std::round(x(v).real() * 1e6) / 1e6);
            for (int v = 0; v < x.size(); ++v) key.push_back(std::round(x(v).imag() * 1e6) / 1e6);
        } catch (const PatternMismatch&) {
            key.assign(1, HUGE_VAL);
        }
        keyed.push_back({key, *it.end});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, y] : keyed) out.solutions.push_back(y);
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace lrh
