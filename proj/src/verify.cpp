#include "lrh/verify.hpp"

#include "lrh/errors.hpp"

namespace lrh {

SolutionCheck check_solution(const CMat& x, const std::vector<Bracket>& conditions, const std::vector<CMat>& flags,
                             double tol) {
    if (flags.size() != conditions.size()) throw InputError("one flag per condition required");
    SolutionCheck out;
    const int n = static_cast<int>(x.rows()), k = static_cast<int>(x.cols());
    CMat qx = orthonormal_basis(x);
    for (std::size_t c = 0; c < conditions.size(); ++c) {
        const Bracket& b = conditions[c];
        if (b.n != n || b.k != k) throw InputError("solution shape does not match " + b.str());
        for (int i = 1; i <= k; ++i) {
            const int w = b.e[i - 1];
            ConditionCheck cc;
            cc.condition = static_cast<int>(c);
            cc.entry = i;
            cc.required_rank = k + w - i;
            CMat stacked(n, k + w);
            stacked << qx, orthonormal_basis(flags[c].leftCols(w));
            Eigen::JacobiSVD<CMat> svd(stacked);
            const auto& s = svd.singularValues();
            cc.ratio = cc.required_rank < s.size() ? s(cc.required_rank) / s(0) : 0.0;
            cc.pass = cc.ratio < tol;
            out.max_ratio = std::max(out.max_ratio, cc.ratio);
            out.pass = out.pass && cc.pass;
            out.entries.push_back(cc);
        }
    }
    return out;
}

DistinctnessReport distinctness(const std::vector<CMat>& solutions, double tol) {
    DistinctnessReport r;
    for (std::size_t a = 0; a < solutions.size(); ++a)
        for (std::size_t b = a + 1; b < solutions.size(); ++b) {
            double d = grassmann_distance(solutions[a], solutions[b]);
            if (r.min_distance < 0 || d < r.min_distance) r.min_distance = d;
            if (d <= tol) r.collisions.push_back({static_cast<int>(a), static_cast<int>(b)});
        }
    return r;
}

std::int64_t oracle_count(const std::vector<Bracket>& conditions) {
    if (conditions.empty()) throw InputError("empty problem");
    const int n = conditions[0].n, k = conditions[0].k;
    if (n > 8) throw OracleTooLarge("tableau oracle is limited to n <= 8");
    std::map<std::pair<Bracket, Bracket>, std::map<Bracket, std::int64_t>> memo;
    std::map<Bracket, std::int64_t> cur{{conditions[0], 1}};
    for (std::size_t j = 1; j < conditions.size(); ++j) {
        std::map<Bracket, std::int64_t> next;
        for (const auto& [sigma, c] : cur) {
            auto key = std::make_pair(sigma, conditions[j]);
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, lr_product_oracle(sigma, conditions[j])).first;
            for (const auto& [rho, m] : it->second) next[rho] += c * m;
        }
        cur = std::move(next);
    }
    auto it = cur.find(bottom_bracket(n, k));
    return it == cur.end() ? 0 : it->second;
}

CountCheck count_check(const SchubertProblem& problem, std::int64_t observed) {
    CountCheck c;
    c.expected = oracle_count(problem.expanded());
    c.observed = observed;
    c.pass = c.expected == observed;
    return c;
}

ResidualReport verify_solutions(const SchubertProblem& problem, const std::vector<CMat>& solutions,
                                const std::vector<CMat>& flags, double tol, double distinct_tol) {
    ResidualReport r;
    auto conds = problem.expanded();
    r.pass = true;
    for (const auto& x : solutions) {
        r.solutions.push_back(check_solution(x, conds, flags, tol));
        r.pass = r.pass && r.solutions.back().pass;
    }
    r.distinct = distinctness(solutions, distinct_tol);
    r.pass = r.pass && r.distinct.collisions.empty();
    if (problem.n <= 8) {
        r.count_checked = true;
        r.count = count_check(problem, static_cast<std::int64_t>(solutions.size()));
        r.pass = r.pass && r.count.pass;
    }
    return r;
}

}  // namespace lrh
