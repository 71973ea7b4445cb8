#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace tori {

template <class T>
struct Lattice {
    Matrix<T> generator; // rows are basis vectors
    SymMatrix<T> gram;
};

template <class T>
Lattice<T> make_lattice(const Matrix<T>& generator)
{
    if (generator.rows() != generator.cols())
        throw DimensionError("lattice generator must be square");
    Matrix<T> g = generator * generator.transpose();
    SymMatrix<T> gram = is_exact_v<T> ? SymMatrix<T>(g) : SymMatrix<T>::symmetrized(g);
    return {generator, gram};
}

template <class T>
using DualLattice = Lattice<T>;

template <class T>
DualLattice<T> dual(const Lattice<T>& lat)
{
    if (scalar_traits<T>::is_zero(determinant(lat.generator)))
        throw SingularMatrixError("singular lattice generator");
    Matrix<T> g = inverse(lat.generator).transpose();
    return {g, inverse(lat.gram)};
}

using IntVector = std::vector<long long>;

template <class T>
struct NormClassList {
    T target;
    std::vector<IntVector> classes;
    bool complete = true;
};

inline bool is_canonical(const IntVector& v)
{
    for (auto x : v)
        if (x != 0)
            return x > 0;
    return false;
}

inline IntVector canonical_sign(IntVector v, int* flipped = nullptr)
{
    if (flipped)
        *flipped = 1;
    for (auto x : v) {
        if (x == 0)
            continue;
        if (x < 0) {
            for (auto& y : v)
                y = -y;
            if (flipped)
                *flipped = -1;
        }
        break;
    }
    return v;
}

template <class T>
T int_quad_form(const SymMatrix<T>& Q, const IntVector& y)
{
    T acc = T(0);
    for (int i = 0; i < Q.n(); ++i) {
        if (y[i] == 0)
            continue;
        T row = T(0);
        for (int j = 0; j < Q.n(); ++j)
            if (y[j] != 0)
                row += Q(i, j) * T(static_cast<long>(y[j]));
        acc += T(static_cast<long>(y[i])) * row;
    }
    return acc;
}

template <class T>
struct Enumerated {
    std::vector<std::pair<IntVector, T>> vectors; // canonical representatives with their norms
    bool complete = true;
};

inline constexpr long long default_box_bound = 1000000;

namespace detail {

// LDL^t with L unit lower triangular; returns (L, d).
template <class T>
std::pair<Matrix<T>, std::vector<T>> ldlt(const SymMatrix<T>& Q)
{
    int n = Q.n();
    Matrix<T> L = Matrix<T>::identity(n);
    std::vector<T> d(n, T(0));
    for (int j = 0; j < n; ++j) {
        T s = Q(j, j);
        for (int k = 0; k < j; ++k)
            s -= L(j, k) * L(j, k) * d[k];
        d[j] = s;
        if (scalar_traits<T>::sign(d[j]) <= 0)
            throw NotPositiveDefiniteError("enumeration needs a positive definite form");
        for (int i = j + 1; i < n; ++i) {
            T t = Q(i, j);
            for (int k = 0; k < j; ++k)
                t -= L(i, k) * L(j, k) * d[k];
            L(i, j) = t / d[j];
        }
    }
    return {L, d};
}

} // namespace detail

// All canonical integer vectors with y^t Q y <= bound (y != 0).
template <class T>
Enumerated<T> enumerate_within(const SymMatrix<T>& Q, const T& bound, long long box_bound = default_box_bound)
{
    int n = Q.n();
    Enumerated<T> out;
    IntVector x(n, 0);
    if constexpr (std::is_same_v<T, Rational>) {
        auto [L, d] = detail::ldlt(Q);
        // Q(x) = sum_i d_i (x_i + sum_{j>i} L_ji x_j)^2
        std::function<void(int, Rational)> rec = [&](int i, Rational rem) {
            if (i < 0) {
                bool nz = std::any_of(x.begin(), x.end(), [](long long v) { return v != 0; });
                if (nz && is_canonical(x))
                    out.vectors.emplace_back(x, bound - rem);
                return;
            }
            Rational c = 0;
            for (int j = i + 1; j < n; ++j)
                c -= L(j, i) * Rational(static_cast<long>(x[j]));
            Rational s = rem / d[i];
            Integer r = floor_sqrt(s) + 1;
            Integer lo = floor_of(c) - r, hi = floor_of(c) + r + 1;
            const Integer bb(static_cast<long>(box_bound));
            if (hi > bb) {
                hi = bb;
                out.complete = false;
            }
            if (lo < -bb) {
                lo = -bb;
                out.complete = false;
            }
            for (long long v = lo.get_si(); v <= hi.get_si(); ++v) {
                Rational t = Rational(static_cast<long>(v)) - c;
                Rational used = d[i] * t * t;
                if (used > rem)
                    continue;
                x[i] = v;
                rec(i - 1, rem - used);
            }
            x[i] = 0;
        };
        rec(n - 1, bound);
    } else {
        SymMatrix<double> Qd = to_double(Q);
        auto [L, d] = detail::ldlt(Qd);
        double b = scalar_traits<T>::to_double(bound);
        const double infl = 1e-9;
        std::function<void(int, double)> rec = [&](int i, double rem) {
            if (i < 0) {
                bool nz = std::any_of(x.begin(), x.end(), [](long long v) { return v != 0; });
                if (nz && is_canonical(x)) {
                    T val = int_quad_form(Q, x);
                    bool ok;
                    if constexpr (is_exact_v<T>)
                        ok = !(bound < val);
                    else
                        ok = val <= bound * (1 + 1e-12) + 1e-300;
                    if (ok)
                        out.vectors.emplace_back(x, val);
                }
                return;
            }
            double c = 0;
            for (int j = i + 1; j < n; ++j)
                c -= L(j, i) * static_cast<double>(x[j]);
            double s = std::max(0.0, rem) / d[i] * (1 + infl) + infl;
            double r = std::sqrt(s);
            double lo_d = std::floor(c - r) - 1, hi_d = std::ceil(c + r) + 1;
            if (hi_d > static_cast<double>(box_bound)) {
                hi_d = static_cast<double>(box_bound);
                out.complete = false;
            }
            if (lo_d < -static_cast<double>(box_bound)) {
                lo_d = -static_cast<double>(box_bound);
                out.complete = false;
            }
            for (long long v = static_cast<long long>(lo_d); v <= static_cast<long long>(hi_d); ++v) {
                double t = static_cast<double>(v) - c;
                double used = d[i] * t * t;
                if (used > rem * (1 + infl) + infl * b)
                    continue;
                x[i] = v;
                rec(i - 1, rem - used);
            }
            x[i] = 0;
        };
        rec(n - 1, b * (1 + infl) + infl);
    }
    std::sort(out.vectors.begin(), out.vectors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

template <class T>
NormClassList<T> enumerate_norm(const SymMatrix<T>& Q, const T& target, long long box_bound = default_box_bound)
{
    if (!is_positive_definite(Q))
        throw NotPositiveDefiniteError("enumerate_norm needs a positive definite form");
    if (scalar_traits<T>::sign(target) <= 0)
        throw Error("enumerate_norm needs a positive target");
    auto all = enumerate_within(Q, target, box_bound);
    NormClassList<T> res{target, {}, all.complete};
    for (auto& [v, val] : all.vectors) {
        bool eq;
        if constexpr (is_exact_v<T>)
            eq = (val == target);
        else
            eq = std::abs(val - target) <= 1e-9 * std::abs(target);
        if (eq)
            res.classes.push_back(v);
    }
    return res;
}

template <class T>
std::pair<T, NormClassList<T>> shortest_vectors(const SymMatrix<T>& Q)
{
    if (!is_positive_definite(Q))
        throw NotPositiveDefiniteError("shortest_vectors needs a positive definite form");
    T bound = Q(0, 0);
    for (int i = 1; i < Q.n(); ++i)
        if (Q(i, i) < bound)
            bound = Q(i, i);
    auto all = enumerate_within(Q, bound);
    T best = bound;
    for (auto& [v, val] : all.vectors)
        if (val < best)
            best = val;
    NormClassList<T> res{best, {}, all.complete};
    for (auto& [v, val] : all.vectors) {
        bool eq;
        if constexpr (is_exact_v<T>)
            eq = (val == best);
        else
            eq = std::abs(val - best) <= 1e-9 * std::abs(best);
        if (eq)
            res.classes.push_back(v);
    }
    return {best, res};
}

template <class T>
struct SpectrumEntry {
    T norm;            // y^t Q_dual y
    double eigenvalue; // 4 pi^2 norm
    int multiplicity;
};

namespace detail {

template <class T>
std::vector<std::pair<T, int>> grouped_norms(const Enumerated<T>& e)
{
    std::vector<std::pair<T, int>> vals;
    std::vector<T> all;
    for (auto& [v, val] : e.vectors)
        all.push_back(val);
    if constexpr (is_exact_v<T>) {
        std::sort(all.begin(), all.end(), [](const T& a, const T& b) { return a < b; });
        for (auto& v : all) {
            if (!vals.empty() && vals.back().first == v)
                ++vals.back().second;
            else
                vals.emplace_back(v, 1);
        }
    } else {
        std::sort(all.begin(), all.end());
        for (auto& v : all) {
            if (!vals.empty() && std::abs(vals.back().first - v) <= 1e-9 * std::abs(v))
                ++vals.back().second;
            else
                vals.emplace_back(v, 1);
        }
    }
    return vals;
}

} // namespace detail

template <class T>
std::vector<SpectrumEntry<T>> spectrum(const SymMatrix<T>& Q_dual, int count)
{
    if (!is_positive_definite(Q_dual))
        throw NotPositiveDefiniteError("spectrum needs a positive definite form");
    const double four_pi2 = 4 * std::numbers::pi * std::numbers::pi;
    std::vector<SpectrumEntry<T>> out{{T(0), 0.0, 1}};
    if (count <= 1)
        return std::vector<SpectrumEntry<T>>(out.begin(), out.begin() + std::max(0, count));
    T R = shortest_vectors(Q_dual).first;
    for (int iter = 0; iter < 64; ++iter) {
        auto e = enumerate_within(Q_dual, R);
        auto vals = detail::grouped_norms(e);
        if (static_cast<int>(vals.size()) + 1 >= count) {
            for (int k = 0; k + 1 < count; ++k)
                out.push_back({vals[k].first, four_pi2 * scalar_traits<T>::to_double(vals[k].first), 2 * vals[k].second});
            return out;
        }
        R = R * T(2);
    }
    throw ConvergenceError("spectrum enumeration did not reach the requested count");
}

// 1-based index of the norm value among distinct nonzero values y^t Q_dual y.
template <class T>
int eigenfunction_index(const SymMatrix<T>& Q_dual, const T& target_norm)
{
    if (!is_positive_definite(Q_dual))
        throw NotPositiveDefiniteError("eigenfunction_index needs a positive definite form");
    if (scalar_traits<T>::sign(target_norm) <= 0)
        throw Error("target is not a nonzero spectrum value");
    auto vals = detail::grouped_norms(enumerate_within(Q_dual, target_norm));
    for (std::size_t k = 0; k < vals.size(); ++k) {
        bool eq;
        if constexpr (is_exact_v<T>)
            eq = vals[k].first == target_norm;
        else
            eq = std::abs(vals[k].first - target_norm) <= 1e-9 * std::abs(target_norm);
        if (eq)
            return static_cast<int>(k) + 1;
    }
    throw Error("target is not in the spectrum");
}

// Deterministic integer in [lo, hi] from a 64-bit engine.
inline long long draw(std::mt19937_64& rng, long long lo, long long hi)
{
    unsigned long long span = static_cast<unsigned long long>(hi - lo) + 1;
    return lo + static_cast<long long>(rng() % span);
}

using RatVector = std::vector<Rational>;

// Second intersection of the line through u0 and u' with the quadric x^t Q x = 1.
inline RatVector project_to_ellipsoid(const SymMatrix<Rational>& Q, const RatVector& u0, const RatVector& up)
{
    int n = Q.n();
    RatVector d(n);
    for (int i = 0; i < n; ++i)
        d[i] = up[i] - u0[i];
    Rational dQd = quad_form(Q, d);
    if (dQd == 0)
        throw Error("degenerate direction");
    Rational u0Qd = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            u0Qd += u0[i] * Q(i, j) * d[j];
    Rational s = -2 * u0Qd / dQd;
    RatVector u(n);
    for (int i = 0; i < n; ++i)
        u[i] = u0[i] + s * d[i];
    return u;
}

struct EllipsoidSampler {
    SymMatrix<Rational> Q;
    RatVector u0;
    std::mt19937_64 rng;
    int plane = 0;
    long long height = 6;
    long long max_den = 4;

    EllipsoidSampler(SymMatrix<Rational> Q_, RatVector u0_, std::uint64_t seed) : Q(std::move(Q_)), u0(std::move(u0_)), rng(seed)
    {
        if (quad_form(Q, u0) != 1)
            throw Error("u0 is not on the ellipsoid");
        plane = -1;
        for (int i = 0; i < Q.n(); ++i)
            if (u0[i] != 0) {
                plane = i;
                break;
            }
        if (plane < 0)
            throw Error("u0 is not on the ellipsoid");
    }

    // Next point (possibly equal to an earlier one).
    RatVector next()
    {
        int n = Q.n();
        for (;;) {
            RatVector up(n, Rational(0));
            for (int i = 0; i < n; ++i) {
                if (i == plane)
                    continue;
                long long a = draw(rng, -height, height);
                long long b = draw(rng, 1, max_den);
                up[i] = make_rational(Integer(static_cast<long>(a)), Integer(static_cast<long>(b)));
            }
            RatVector u = project_to_ellipsoid(Q, u0, up);
            if (u != u0)
                return u;
        }
    }
};

inline std::vector<RatVector> rational_points_on_ellipsoid(const SymMatrix<Rational>& Q, const RatVector& u0, int count, std::uint64_t seed)
{
    EllipsoidSampler sampler(Q, u0, seed);
    std::vector<RatVector> pts;
    for (int attempts = 0; static_cast<int>(pts.size()) < count; ++attempts) {
        if (attempts > 1000 * (count + 10))
            throw Error("could not generate enough distinct rational points");
        RatVector u = sampler.next();
        if (std::find(pts.begin(), pts.end(), u) == pts.end())
            pts.push_back(u);
    }
    return pts;
}

} // namespace tori
