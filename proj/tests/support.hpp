#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lrh/linalg.hpp"
#include "lrh/patterns.hpp"

namespace lrh::testing {

inline CVec random_point(int d, Rng& rng) {
    CVec x(d);
    for (int v = 0; v < d; ++v) x(v) = rng.gaussian();
    return x;
}

inline CMat random_matrix(int r, int c, Rng& rng) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.gaussian();
    return m;
}

// Pattern from a layout string: '1', '0' or 'x' per entry, rows separated by '/'.
inline LocalizationPattern layout(int n, int k, const std::string& s) {
    LocalizationPattern p;
    p.n = n;
    p.k = k;
    p.cell.assign(n * k, LocalizationPattern::kZero);
    p.pivot.assign(k, 0);
    int i = 0, j = 0;
    std::vector<std::pair<int, int>> vars;
    for (char ch : s) {
        if (ch == '/') {
            ++i;
            j = 0;
            continue;
        }
        if (ch == '1') {
            p.cell[i * k + j] = LocalizationPattern::kOne;
            p.pivot[j] = i + 1;
        } else if (ch == 'x') {
            vars.push_back({j, i});
        }
        ++j;
    }
    std::sort(vars.begin(), vars.end());
    for (auto [col, row] : vars) {
        p.cell[row * k + col] = p.var_count();
        p.var_pos.push_back({row + 1, col + 1});
    }
    return p;
}

// Affine chart [I; W] with all k(n-k) variables.
inline LocalizationPattern affine_chart(int n, int k) {
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (i) s += '/';
        for (int j = 0; j < k; ++j) s += (i < k ? (i == j ? '1' : '0') : 'x');
    }
    return layout(n, k, s);
}

}  // namespace lrh::testing
