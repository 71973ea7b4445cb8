#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace tori {

// Exact feasibility for { x >= 0 : A x = b } by phase-one simplex with Bland's rule.
// Returns a basic feasible solution or nullopt.
template <class T>
std::optional<std::vector<T>> lp_feasible(const Matrix<T>& A, const std::vector<T>& b)
{
    using tr = scalar_traits<T>;
    static_assert(is_exact_v<T>, "lp_feasible needs exact scalars");
    int m = A.rows(), n = A.cols();
    if (static_cast<int>(b.size()) != m)
        throw DimensionError("lp_feasible: right-hand side size");
    // tableau columns: n originals, m artificials, rhs
    Matrix<T> t(m + 1, n + m + 1, T(0));
    for (int i = 0; i < m; ++i) {
        bool neg = tr::sign(b[i]) < 0;
        for (int j = 0; j < n; ++j)
            t(i, j) = neg ? -A(i, j) : A(i, j);
        t(i, n + i) = T(1);
        t(i, n + m) = neg ? -b[i] : b[i];
    }
    // objective row: minimize sum of artificials, stored as reduced costs
    for (int j = 0; j <= n + m; ++j) {
        if (j >= n && j < n + m)
            continue;
        T s = T(0);
        for (int i = 0; i < m; ++i)
            s += t(i, j);
        t(m, j) = -s;
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i)
        basis[i] = n + i;

    auto pivot = [&](int r, int c) {
        T inv = T(1) / t(r, c);
        for (int j = 0; j <= n + m; ++j)
            t(r, j) = t(r, j) * inv;
        for (int i = 0; i <= m; ++i) {
            if (i == r || tr::is_zero(t(i, c)))
                continue;
            T f = t(i, c);
            for (int j = 0; j <= n + m; ++j)
                t(i, j) -= f * t(r, j);
        }
        basis[r] = c;
    };

    for (;;) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j)
            if (tr::sign(t(m, j)) < 0) {
                enter = j;
                break;
            }
        if (enter < 0)
            break;
        int leave = -1;
        T best = T(0);
        for (int i = 0; i < m; ++i) {
            if (tr::sign(t(i, enter)) <= 0)
                continue;
            T ratio = t(i, n + m) / t(i, enter);
            if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0)
            break; // unbounded direction cannot occur in phase one
        pivot(leave, enter);
    }
    if (!tr::is_zero(t(m, n + m)))
        return std::nullopt;
    std::vector<T> x(n, T(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < n)
            x[basis[i]] = t(i, n + m);
    return x;
}

} // namespace tori
