#include "lrh/combinatorics.hpp"

#include <cctype>
#include <sstream>

#include "lrh/errors.hpp"

namespace lrh {

Bracket::Bracket(int n_, std::vector<int> entries) : n(n_), k(static_cast<int>(entries.size())), e(std::move(entries)) {
    if (k < 1 || k > n) throw InputError("bracket size must satisfy 1 <= k <= n");
    for (int i = 0; i < k; ++i) {
        if (e[i] < 1 || e[i] > n) throw InputError("bracket entry out of range in " + str());
        if (i > 0 && e[i] <= e[i - 1]) throw InputError("bracket entries must increase in " + str());
    }
}

std::string Bracket::str() const {
    std::string s = "[";
    for (int i = 0; i < k; ++i) {
        if (i) s += ' ';
        s += std::to_string(e[i]);
    }
    return s + "]";
}

std::vector<Bracket> SchubertProblem::expanded() const {
    std::vector<Bracket> out;
    for (const auto& c : conditions)
        for (int m = 0; m < c.multiplicity; ++m) out.push_back(c.bracket);
    return out;
}

int SchubertProblem::total_codim() const {
    int s = 0;
    for (const auto& c : conditions) s += c.multiplicity * codim(c.bracket);
    return s;
}

std::string SchubertProblem::str() const {
    std::string s;
    for (const auto& c : conditions) {
        if (!s.empty()) s += ' ';
        s += c.bracket.str();
        if (c.multiplicity != 1) s += "^" + std::to_string(c.multiplicity);
    }
    return s;
}

int codim(const Bracket& b) {
    int s = 0;
    for (int i = 1; i <= b.k; ++i) s += b.n - b.k + i - b.e[i - 1];
    return s;
}

Bracket dual(const Bracket& b) {
    std::vector<int> d(b.k);
    for (int i = 0; i < b.k; ++i) d[i] = b.n + 1 - b.e[b.k - 1 - i];
    return Bracket(b.n, d);
}

Bracket identity_bracket(int n, int k) {
    std::vector<int> e(k);
    for (int i = 0; i < k; ++i) e[i] = n - k + 1 + i;
    return Bracket(n, e);
}

Bracket bottom_bracket(int n, int k) {
    std::vector<int> e(k);
    for (int i = 0; i < k; ++i) e[i] = i + 1;
    return Bracket(n, e);
}

std::vector<int> to_partition(const Bracket& b) {
    std::vector<int> lam(b.k);
    for (int i = 1; i <= b.k; ++i) lam[i - 1] = b.n - b.k + i - b.e[i - 1];
    return lam;
}

std::vector<Bracket> all_brackets(int n, int k) {
    std::vector<Bracket> out;
    std::vector<int> e(k);
    for (int i = 0; i < k; ++i) e[i] = i + 1;
    while (true) {
        out.emplace_back(n, e);
        int i = k - 1;
        while (i >= 0 && e[i] == n - k + 1 + i) --i;
        if (i < 0) break;
        ++e[i];
        for (int j = i + 1; j < k; ++j) e[j] = e[j - 1] + 1;
    }
    return out;
}

namespace {

// Counts LR tableaux of shape nu/lam and content mu.
class TableauCounter {
public:
    TableauCounter(std::vector<int> lam, std::vector<int> mu, std::vector<int> nu)
        : lam_(std::move(lam)), mu_(std::move(mu)), nu_(std::move(nu)) {
        rows_ = static_cast<int>(nu_.size());
        fill_.assign(rows_, std::vector<int>(nu_.empty() ? 0 : nu_[0], -1));
        for (int i = 0; i < rows_; ++i)
            for (int j = nu_[i] - 1; j >= lam_[i]; --j) cells_.push_back({i, j});
        used_.assign(mu_.size(), 0);
    }

    std::int64_t count() { return rec(0); }

private:
    std::int64_t rec(std::size_t idx) {
        if (idx == cells_.size()) return used_ == mu_ ? 1 : 0;
        auto [i, j] = cells_[idx];
        std::int64_t total = 0;
        for (int v = 0; v < static_cast<int>(mu_.size()); ++v) {
            if (used_[v] >= mu_[v]) continue;
            if (v > 0 && used_[v] + 1 > used_[v - 1]) continue;  // reverse reading word stays a lattice word
            if (j + 1 < nu_[i] && fill_[i][j + 1] < v) continue;  // rows weakly increase
            if (i > 0 && j >= lam_[i - 1] && j < nu_[i - 1] && fill_[i - 1][j] >= v) continue;  // columns strictly increase
            fill_[i][j] = v;
            ++used_[v];
            total += rec(idx + 1);
            --used_[v];
            fill_[i][j] = -1;
        }
        return total;
    }

    std::vector<int> lam_, mu_, nu_;
    int rows_ = 0;
    std::vector<std::pair<int, int>> cells_;
    std::vector<std::vector<int>> fill_;
    std::vector<int> used_;
};

}  // namespace

std::int64_t lr_coefficient_oracle(const Bracket& omega, const Bracket& tau, const Bracket& sigma) {
    if (omega.n != tau.n || omega.n != sigma.n || omega.k != tau.k || omega.k != sigma.k)
        throw InputError("brackets must share the ambient (n,k)");
    if (codim(sigma) != codim(omega) + codim(tau))
        throw InputError("lr_coefficient_oracle needs codim(sigma) = codim(omega) + codim(tau)");
    auto lam = to_partition(omega), mu = to_partition(tau), nu = to_partition(sigma);
    for (int i = 0; i < omega.k; ++i)
        if (lam[i] > nu[i]) return 0;
    return TableauCounter(lam, mu, nu).count();
}

std::map<Bracket, std::int64_t> lr_product_oracle(const Bracket& omega, const Bracket& tau) {
    std::map<Bracket, std::int64_t> out;
    int target = codim(omega) + codim(tau);
    if (target > omega.k * (omega.n - omega.k)) return out;
    for (const auto& s : all_brackets(omega.n, omega.k)) {
        if (codim(s) != target) continue;
        auto c = lr_coefficient_oracle(omega, tau, s);
        if (c) out[s] = c;
    }
    return out;
}

namespace {

struct Scanner {
    const std::string& s;
    std::size_t p = 0;

    void skip() {
        while (p < s.size() && (std::isspace(static_cast<unsigned char>(s[p])) || s[p] == ',')) ++p;
    }
    bool eof() {
        skip();
        return p >= s.size();
    }
    bool take(char c) {
        skip();
        if (p < s.size() && s[p] == c) {
            ++p;
            return true;
        }
        return false;
    }
    int integer() {
        skip();
        std::size_t start = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        if (start == p) throw InputError("expected an integer at position " + std::to_string(start) + " in \"" + s + "\"");
        if (p - start > 6) throw InputError("integer too large in \"" + s + "\"");
        return std::stoi(s.substr(start, p - start));
    }
};

Bracket scan_bracket(Scanner& sc, int n, int k) {
    if (!sc.take('[')) throw InputError("expected '[' in \"" + sc.s + "\"");
    std::vector<int> e;
    while (!sc.take(']')) {
        if (sc.eof()) throw InputError("unterminated bracket in \"" + sc.s + "\"");
        e.push_back(sc.integer());
    }
    if (static_cast<int>(e.size()) != k)
        throw InputError("bracket has " + std::to_string(e.size()) + " entries, expected k=" + std::to_string(k));
    return Bracket(n, e);
}

}  // namespace

Bracket parse_bracket(const std::string& text, int n, int k) {
    Scanner sc{text};
    Bracket b = scan_bracket(sc, n, k);
    if (!sc.eof()) throw InputError("trailing text after bracket in \"" + text + "\"");
    return b;
}

SchubertProblem parse_problem(const std::string& text, int n, int k) {
    if (k < 1 || n < 2 || k >= n) throw InputError("need 1 <= k < n");
    SchubertProblem prob{n, k, {}};
    Scanner sc{text};
    while (!sc.eof()) {
        Condition c{scan_bracket(sc, n, k), 1};
        if (sc.take('^')) {
            c.multiplicity = sc.integer();
            if (c.multiplicity < 1) throw InputError("multiplicity must be positive");
        }
        prob.conditions.push_back(c);
    }
    if (prob.conditions.empty()) throw InputError("empty problem");
    return prob;
}

}  // namespace lrh
