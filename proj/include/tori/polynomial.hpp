#pragma once

#include <algorithm>
#include <cstdlib>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace tori {

// Coefficients are stored low-to-high.
using IntPoly = std::vector<Integer>;
using RatPoly = std::vector<Rational>;

template <class P>
void trim(P& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

template <class P>
int degree(const P& p)
{
    int d = static_cast<int>(p.size()) - 1;
    while (d >= 0 && p[d] == 0)
        --d;
    return d;
}

inline RatPoly to_ratpoly(const IntPoly& p)
{
    RatPoly r;
    for (const auto& c : p)
        r.emplace_back(c);
    trim(r);
    return r;
}

// Primitive integer multiple with positive leading coefficient.
inline IntPoly primitive_part(const RatPoly& p)
{
    RatPoly q = p;
    trim(q);
    if (q.empty())
        return {};
    Integer den = 1;
    for (const auto& c : q)
        den = lcm_of(den, c.get_den());
    IntPoly r;
    Integer g = 0;
    for (const auto& c : q) {
        Rational v = c * den;
        r.push_back(v.get_num());
        g = gcd_of(g, v.get_num());
    }
    if (r.back() < 0)
        g = -g;
    for (auto& c : r)
        c /= g;
    return r;
}

inline IntPoly primitive_part(const IntPoly& p)
{
    return primitive_part(to_ratpoly(p));
}

template <class P, class X>
X evaluate(const P& p, const X& x)
{
    X acc = X(0);
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        acc = acc * x + X(p[i]);
    return acc;
}

inline Rational eval_rat(const IntPoly& p, const Rational& x)
{
    Rational acc = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        acc = acc * x + p[i];
    return acc;
}

inline Rational eval_rat(const RatPoly& p, const Rational& x)
{
    Rational acc = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        acc = acc * x + p[i];
    return acc;
}

inline double eval_double(const IntPoly& p, double x)
{
    double acc = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        acc = acc * x + p[i].get_d();
    return acc;
}

inline RatPoly derivative(const RatPoly& p)
{
    RatPoly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b)
{
    if (a.empty() || b.empty())
        return {};
    RatPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline RatPoly poly_sub(const RatPoly& a, const RatPoly& b)
{
    RatPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] -= b[i];
    trim(r);
    return r;
}

// (quotient, remainder) over the rationals
inline std::pair<RatPoly, RatPoly> poly_divmod(RatPoly a, RatPoly b)
{
    trim(a);
    trim(b);
    if (b.empty())
        throw Error("polynomial division by zero");
    int db = degree(b);
    RatPoly q(std::max<int>(0, degree(a) - db + 1), Rational(0));
    while (!a.empty() && degree(a) >= db) {
        int da = degree(a);
        Rational c = a[da] / b[db];
        q[da - db] = c;
        for (int i = 0; i <= db; ++i)
            a[da - db + i] -= c * b[i];
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline RatPoly poly_mod(const RatPoly& a, const RatPoly& b)
{
    return poly_divmod(a, b).second;
}

// Sturm chain of p
inline std::vector<RatPoly> sturm_chain(const RatPoly& p)
{
    std::vector<RatPoly> chain{p, derivative(p)};
    while (!chain.back().empty()) {
        RatPoly r = poly_mod(chain[chain.size() - 2], chain.back());
        for (auto& c : r)
            c = -c;
        if (r.empty())
            break;
        chain.push_back(r);
    }
    if (chain.back().empty())
        chain.pop_back();
    return chain;
}

inline int sign_changes_at(const std::vector<RatPoly>& chain, const Rational& x)
{
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        int s = sgn(eval_rat(q, x));
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

// Number of distinct real roots in (lo, hi]
inline int count_roots(const std::vector<RatPoly>& chain, const Rational& lo, const Rational& hi)
{
    return sign_changes_at(chain, lo) - sign_changes_at(chain, hi);
}

inline Rational root_bound(const RatPoly& p)
{
    int d = degree(p);
    Rational m = 0;
    for (int i = 0; i < d; ++i) {
        Rational v = abs(p[i] / p[d]);
        if (v > m)
            m = v;
    }
    return m + 1;
}

struct IsolatingInterval {
    Rational lo, hi; // root in (lo, hi), neither endpoint a root
};

// Isolating intervals of the distinct real roots of a squarefree polynomial, ascending.
inline std::vector<IsolatingInterval> isolate_real_roots(const RatPoly& p_in)
{
    RatPoly p = p_in;
    trim(p);
    if (degree(p) < 1)
        return {};
    auto chain = sturm_chain(p);
    Rational B = root_bound(p);
    std::vector<IsolatingInterval> out;
    std::vector<std::pair<Rational, Rational>> stack{{-B, B}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int c = count_roots(chain, lo, hi);
        if (c == 0)
            continue;
        if (c == 1 && eval_rat(p, hi) != 0) {
            out.push_back({lo, hi});
            continue;
        }
        Rational mid = (lo + hi) / 2;
        if (eval_rat(p, mid) == 0) {
            // nudge the split point off the rational root
            Rational w = (hi - lo) / 7;
            mid += w;
            if (eval_rat(p, mid) == 0)
                mid -= 2 * w;
        }
        stack.push_back({mid, hi});
        stack.push_back({lo, mid});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    return out;
}

// Bisect an isolating interval until its width is below `width`.
inline IsolatingInterval refine_root(const RatPoly& p, IsolatingInterval iv, const Rational& width)
{
    int slo = sgn(eval_rat(p, iv.lo));
    while (iv.hi - iv.lo > width) {
        Rational mid = (iv.lo + iv.hi) / 2;
        int sm = sgn(eval_rat(p, mid));
        if (sm == 0)
            return {mid - width / 4, mid + width / 4};
        if (sm == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

namespace detail {

inline std::vector<Integer> positive_divisors(const Integer& a_in)
{
    Integer a = abs(a_in);
    if (a == 0)
        throw Error("divisors of zero requested");
    if (a > Integer("1000000000000000000"))
        throw UnsupportedError("coefficient too large for divisor enumeration");
    unsigned long long v = std::stoull(a.get_str());
    std::vector<Integer> small, large;
    for (unsigned long long d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            small.emplace_back(std::to_string(d));
            if (d * d != v)
                large.emplace_back(std::to_string(v / d));
        }
    }
    std::reverse(large.begin(), large.end());
    small.insert(small.end(), large.begin(), large.end());
    return small;
}

// Rational roots of a nonzero integer polynomial (distinct, ascending).
inline std::vector<Rational> rational_roots(const IntPoly& p_in)
{
    IntPoly p = p_in;
    trim(p);
    std::vector<Rational> roots;
    if (degree(p) < 1)
        return roots;
    std::size_t shift = 0;
    while (p[shift] == 0)
        ++shift;
    if (shift > 0)
        roots.push_back(0);
    IntPoly q(p.begin() + static_cast<long>(shift), p.end());
    if (degree(q) >= 1) {
        auto nums = positive_divisors(q.front());
        auto dens = positive_divisors(q.back());
        for (const auto& a : nums)
            for (const auto& b : dens)
                for (int s : {1, -1}) {
                    Rational x = make_rational(a * s, b);
                    if (eval_rat(q, x) == 0)
                        roots.push_back(x);
                }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

inline IntPoly exact_quotient(const IntPoly& p, const IntPoly& d)
{
    auto [q, r] = poly_divmod(to_ratpoly(p), to_ratpoly(d));
    if (!r.empty())
        throw Error("inexact polynomial quotient");
    return primitive_part(q);
}

// Splits a primitive quartic without rational roots into two integer quadratics, if possible.
inline bool split_quartic(const IntPoly& f, IntPoly& g, IntPoly& h)
{
    const Integer &a0 = f[0], &a1 = f[1], &a2 = f[2], &a3 = f[3], &a4 = f[4];
    for (const auto& b2 : positive_divisors(a4)) {
        Integer c2 = a4 / b2;
        for (const auto& pb : positive_divisors(a0)) {
            for (int s : {1, -1}) {
                Integer b0 = pb * s;
                Integer c0 = a0 / b0;
                Integer det = c2 * b0 - b2 * c0;
                std::vector<std::pair<Integer, Integer>> cands;
                if (det != 0) {
                    Integer nb = a3 * b0 - b2 * a1, nc = c2 * a1 - c0 * a3;
                    if (mpz_divisible_p(nb.get_mpz_t(), det.get_mpz_t()) && mpz_divisible_p(nc.get_mpz_t(), det.get_mpz_t()))
                        cands.emplace_back(nb / det, nc / det);
                } else {
                    // c2 b1^2 - a3 b1 + b2 (a2 - b2 c0 - b0 c2) = 0
                    Integer k = b2 * (a2 - b2 * c0 - b0 * c2);
                    Integer disc = a3 * a3 - 4 * c2 * k;
                    if (is_perfect_square(disc)) {
                        Integer sq = isqrt(disc);
                        for (int t : {1, -1}) {
                            Integer num = a3 + t * sq, den = 2 * c2;
                            if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
                                continue;
                            Integer b1 = num / den;
                            Integer rem = a3 - c2 * b1;
                            if (!mpz_divisible_p(rem.get_mpz_t(), b2.get_mpz_t()))
                                continue;
                            cands.emplace_back(b1, rem / b2);
                        }
                    }
                }
                for (const auto& [b1, c1] : cands) {
                    if (b2 * c1 + b1 * c2 == a3 && b2 * c0 + b1 * c1 + b0 * c2 == a2 && b1 * c0 + b0 * c1 == a1) {
                        g = {b0, b1, b2};
                        h = {c0, c1, c2};
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

} // namespace detail

// Irreducible factors (primitive, positive leading coefficient, with repetition) of a
// nonzero integer polynomial of degree at most 4.
inline std::vector<IntPoly> factor_degree_le4(const IntPoly& p_in)
{
    IntPoly p = p_in;
    trim(p);
    if (p.empty())
        throw Error("factorization of the zero polynomial");
    if (degree(p) > 4)
        throw UnsupportedError("factorization supported only up to degree 4");
    std::vector<IntPoly> factors;
    if (degree(p) < 1)
        return factors;
    p = primitive_part(p);
    bool again = true;
    while (again && degree(p) >= 1) {
        again = false;
        for (const auto& x : detail::rational_roots(p)) {
            IntPoly lin = primitive_part(RatPoly{-x, Rational(1)});
            if (degree(p) == 1) {
                factors.push_back(p);
                p = {Integer(1)};
                break;
            }
            factors.push_back(lin);
            p = detail::exact_quotient(p, lin);
            again = true;
            break;
        }
    }
    if (degree(p) == 4) {
        IntPoly g, h;
        if (detail::split_quartic(p, g, h)) {
            factors.push_back(primitive_part(g));
            factors.push_back(primitive_part(h));
            p = {Integer(1)};
        }
    }
    if (degree(p) >= 1)
        factors.push_back(p);
    std::sort(factors.begin(), factors.end(), [](const IntPoly& a, const IntPoly& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return factors;
}

inline bool irreducible_degree_le4(const IntPoly& p)
{
    IntPoly q = p;
    trim(q);
    if (q.empty())
        throw Error("irreducibility of the zero polynomial");
    if (degree(q) > 4)
        throw UnsupportedError("irreducibility supported only up to degree 4");
    if (degree(q) < 1)
        return false;
    return factor_degree_le4(q).size() == 1;
}

} // namespace tori
