#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace tori {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& p, const Integer& q)
{
    if (q == 0)
        throw Error("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// Accepts "p", "p/q" and plain decimals such as "-0.25".
inline Rational parse_rational(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw ParseError("empty rational");
    if (s[0] == '+')
        s.erase(0, 1);
    auto is_int = [](std::string_view v) {
        std::size_t i = (!v.empty() && v[0] == '-') ? 1 : 0;
        if (i >= v.size())
            return false;
        for (; i < v.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(v[i])))
                return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        auto num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den))
            throw ParseError("malformed rational '" + std::string(text) + "'");
        Integer d(den);
        if (d == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        return make_rational(Integer(num), d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg)
            ip.erase(0, 1);
        if (ip.empty())
            ip = "0";
        if (fp.empty() || !is_int(ip) || !is_int(fp) || fp[0] == '-')
            throw ParseError("malformed decimal '" + std::string(text) + "'");
        Integer den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i)
            den *= 10;
        Integer num = Integer(ip) * den + Integer(fp);
        return make_rational(neg ? Integer(-num) : num, den);
    }
    if (!is_int(s))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    return Rational(Integer(s));
}

inline std::string format_rational(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Integer floor_of(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer isqrt(const Integer& a)
{
    if (a < 0)
        throw Error("isqrt of negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// floor(sqrt(x)) for x >= 0
inline Integer floor_sqrt(const Rational& x)
{
    return isqrt(floor_of(x));
}

inline bool is_perfect_square(const Integer& a)
{
    return a >= 0 && mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

inline bool is_rational_square(const Rational& x)
{
    return x >= 0 && is_perfect_square(x.get_num()) && is_perfect_square(x.get_den());
}

inline Integer lcm_of(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer gcd_of(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline double to_double(const Rational& r)
{
    return r.get_d();
}

// m = k^2 * d with d squarefree, m > 0.
inline std::pair<Integer, Integer> squarefree_split(Integer m)
{
    if (m <= 0)
        throw Error("squarefree_split needs a positive integer");
    Integer k = 1, d = 1;
    const unsigned long limit = 1000000;
    for (unsigned long p = 2; p <= limit; p += (p == 2 ? 1 : 2)) {
        Integer pp = Integer(p) * p;
        if (pp > m)
            break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                m /= p;
                k *= p;
            } else {
                d *= p;
                break;
            }
        }
    }
    if (m > 1) {
        if (is_perfect_square(m)) {
            k *= isqrt(m);
        } else {
            Integer bound = Integer(limit) * limit * limit;
            if (m >= bound)
                throw UnsupportedError("squarefree part not certifiable for large cofactor");
            d *= m;
        }
    }
    return {k, d};
}

} // namespace tori
