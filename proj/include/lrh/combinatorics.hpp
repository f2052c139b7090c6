#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lrh {

struct Bracket {
    int n = 0;
    int k = 0;
    std::vector<int> e;  // 1-based entries, strictly increasing

    Bracket() = default;
    Bracket(int n_, std::vector<int> entries);

    int operator[](int i) const { return e[i]; }
    auto operator<=>(const Bracket&) const = default;
    std::string str() const;  // "[2 4 6]"
};

struct Condition {
    Bracket bracket;
    int multiplicity = 1;
};

struct SchubertProblem {
    int n = 0;
    int k = 0;
    std::vector<Condition> conditions;

    // One bracket per condition, multiplicities unrolled, order kept.
    std::vector<Bracket> expanded() const;
    int total_codim() const;
    bool complete() const { return total_codim() == k * (n - k); }
    std::string str() const;  // "[2 4 6]^3 [1 3 5]"
};

int codim(const Bracket& b);
Bracket dual(const Bracket& b);
Bracket identity_bracket(int n, int k);  // [n-k+1 ... n], codim 0
Bracket bottom_bracket(int n, int k);    // [1 2 ... k], codim k(n-k)

// lambda_i = n-k+i-b_i, weakly decreasing, |lambda| = codim(b).
std::vector<int> to_partition(const Bracket& b);

std::vector<Bracket> all_brackets(int n, int k);

// c^sigma_{omega,tau}, counted by enumerating Littlewood-Richardson skew tableaux.
// Independent of the checker game on purpose.
std::int64_t lr_coefficient_oracle(const Bracket& omega, const Bracket& tau, const Bracket& sigma);

// omega * tau expanded in Schubert classes, by the tableau oracle.
std::map<Bracket, std::int64_t> lr_product_oracle(const Bracket& omega, const Bracket& tau);

Bracket parse_bracket(const std::string& text, int n, int k);
SchubertProblem parse_problem(const std::string& text, int n, int k);

}  // namespace lrh
