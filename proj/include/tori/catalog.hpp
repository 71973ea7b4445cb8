#pragma once

#include <functional>
#include <string>
#include <vector>

#include "algebraic.hpp"
#include "errors.hpp"
#include "immersion.hpp"
#include "logdet_opt.hpp"

namespace tori {

struct CatalogEntry {
    std::string id;
    std::string description;
    MatrixData<AlgebraicNumber> data;
    int degree = 1;
    IntPoly minpoly;                    // empty for rational entries
    std::vector<double> weights_approx; // expected numerical weights
    Embedding expected_embedding = Embedding::unknown;
};

namespace detail {

using Alg = AlgebraicNumber;

inline Alg q(long p, long d = 1) { return Alg(make_rational(Integer(p), Integer(d))); }

inline SymMatrix<Alg> sym3(const Alg& a11, const Alg& a12, const Alg& a13, const Alg& a22, const Alg& a23, const Alg& a33)
{
    SymMatrix<Alg> Q(3);
    Q.set(0, 0, a11), Q.set(0, 1, a12), Q.set(0, 2, a13);
    Q.set(1, 1, a22), Q.set(1, 2, a23), Q.set(2, 2, a33);
    return Q;
}

// unit-diagonal form [[1, a, b], [a, 1, c], [b, c, 1]] scaled by s
inline SymMatrix<Alg> unit_form(const Alg& a, const Alg& b, const Alg& c, const Rational& s)
{
    Alg one(1);
    return Alg(s) * sym3(one, a, b, one, c, one);
}

inline MatrixData<Alg> assemble(SymMatrix<Alg> Q, IntMatrix Y, std::vector<Alg> w)
{
    MatrixData<Alg> d;
    d.n = Q.n();
    d.N = Y.cols();
    d.Q = std::move(Q);
    d.Y = std::move(Y);
    d.weights = std::move(w);
    return d;
}

inline FieldPtr field_of(IntPoly f, Rational lo, Rational hi) { return std::make_shared<NumberField>(std::move(f), std::move(lo), std::move(hi)); }

inline IntPoly ipoly(std::initializer_list<long> c)
{
    IntPoly p;
    for (long v : c)
        p.push_back(Integer(v));
    return p;
}

inline CatalogEntry clifford3()
{
    CatalogEntry e;
    e.id = "clifford-3";
    e.description = "Clifford-type flat 3-torus on the cubic lattice";
    e.data = assemble(SymMatrix<Alg>::identity(3), IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {q(1, 3), q(1, 3), q(1, 3)});
    e.weights_approx = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    e.expected_embedding = Embedding::embedded;
    return e;
}

inline CatalogEntry ex_rank5()
{
    CatalogEntry e;
    e.id = "ex-rank5";
    e.description = "rank-5 pencil example over Q(sqrt 10801)";
    auto F = NumberField::sqrt_field(Integer(10801));
    Alg s = sqrt_element(F, Rational(0), Rational(1));
    Alg t0 = q(39337, 443880) - q(1, 3240) * s;
    auto Q = sym3(q(1), q(-343, 1233) + q(10) * t0, q(397, 1233) + q(6) * t0, q(1), q(1048, 1233) + t0, q(1));
    std::vector<Alg> w{q(3, 48040) * (q(12773) - q(107) * s), q(27, 38432) * (q(1105) - q(7) * s), q(3, 192160) * (q(541) * s - q(52459)),
                       q(1, 576480) * (q(121721) + q(481) * s), q(7, 576480) * (q(191) * s + q(2791))};
    e.data = assemble(Q, IntMatrix{{1, 0, 0, 6, 6}, {0, 1, 0, 12, 9}, {0, 0, 1, -15, -12}}, w);
    e.degree = 2;
    e.minpoly = ipoly({-10801, 0, 1});
    for (const auto& x : w)
        e.weights_approx.push_back(x.to_double());
    e.expected_embedding = Embedding::embedded;
    return e;
}

inline CatalogEntry quadratic_s7()
{
    CatalogEntry e;
    e.id = "quadratic-s7";
    e.description = "rank-4 3-torus with quadratic irrational Gram entries, Q(sqrt 553)";
    auto F = NumberField::sqrt_field(Integer(553));
    Alg w = sqrt_element(F, Rational(0), Rational(1));
    Alg a = q(1, 144) * (q(115) - w), b = q(1, 54) * (q(16) - w);
    auto Q = unit_form(a, b, a, Rational(1));
    Alg k = q(38) - w;
    std::vector<Alg> c{k * q(2, 99), k * (w - q(13)) * q(1, 1782), k * q(2, 99), k * (w + q(17)) * q(1, 1782)};
    e.data = assemble(Q, IntMatrix{{1, 0, 0, -3}, {0, 1, 0, 4}, {0, 0, 1, -3}}, c);
    e.degree = 2;
    e.minpoly = ipoly({-553, 0, 1});
    for (const auto& x : c)
        e.weights_approx.push_back(x.to_double());
    e.expected_embedding = Embedding::embedded;
    return e;
}

inline CatalogEntry cubic_a()
{
    CatalogEntry e;
    e.id = "cubic-s7-a";
    e.description = "rank-4 3-torus with cubic irrational Gram entries";
    e.minpoly = ipoly({-33, 149, -160, 50});
    Alg a = Alg::generator(field_of(e.minpoly, Rational(321, 1000), Rational(161, 500)));
    Alg b = (q(2) * a - q(5)) * (q(10) * a - q(11)) / (q(3) * (q(20) * a - q(29)));
    Alg c = -(q(5) * a - q(2)) * (q(10) * a - q(11)) / (q(3) * (q(20) * a - q(29)));
    auto Q = unit_form(a, b, c, Rational(1, 16));
    Alg a2m1 = a * a - q(1), d57 = q(5) * a - q(7), d2029 = q(20) * a - q(29);
    std::vector<Alg> w{-(q(25) * a * a - q(95) * a + q(76)) / (q(6) * a2m1 * d57 * d2029),
                       -(q(430) * a * a - q(1235) * a + q(883)) / (q(15) * a2m1 * d57 * d2029),
                       q(3) * (q(5) * a - q(9)) / (q(10) * (a + q(1)) * d57), q(4) * (q(10) * a - q(11)) / (q(15) * (a + q(1)) * d57)};
    e.data = assemble(Q, IntMatrix{{4, 0, 0, -5}, {0, 4, 0, 2}, {0, 0, 4, -3}}, w);
    e.degree = 3;
    for (const auto& x : w)
        e.weights_approx.push_back(x.to_double());
    return e;
}

inline CatalogEntry cubic_b()
{
    CatalogEntry e;
    e.id = "cubic-s7-b";
    e.description = "second rank-4 3-torus with cubic irrational Gram entries";
    e.minpoly = ipoly({-253, -291, 765, 675});
    Alg a = Alg::generator(field_of(e.minpoly, Rational(-251, 500), Rational(-501, 1000)));
    Alg den = q(8) * (q(15) * a + q(17));
    Alg b = -(q(3) * a + q(5)) * (q(15) * a + q(23)) / den;
    Alg c = -(q(5) * a + q(3)) * (q(15) * a + q(23)) / den;
    auto Q = unit_form(a, b, c, Rational(1, 4));
    Alg a2m1 = a * a - q(1), d151 = q(15) * a - q(1), d1517 = q(15) * a + q(17);
    std::vector<Alg> w{-q(8) * (q(225) * a * a + q(420) * a + q(139)) / (q(27) * a2m1 * d151 * d1517),
                       -q(8) * (q(45) * a * a + q(60) * a + q(7)) / (q(5) * a2m1 * d151 * d1517),
                       -q(16) * (q(15) * a + q(11)) / (q(45) * (a + q(1)) * d151), -q(4) * (q(15) * a + q(23)) / (q(45) * (a + q(1)) * d151)};
    e.data = assemble(Q, IntMatrix{{2, 0, 0, 5}, {0, 2, 0, 3}, {0, 0, 2, 4}}, w);
    e.degree = 3;
    for (const auto& x : w)
        e.weights_approx.push_back(x.to_double());
    return e;
}

inline CatalogEntry quartic_s7()
{
    CatalogEntry e;
    e.id = "quartic-s7";
    e.description = "rank-4 3-torus with quartic irrational Gram entries";
    e.minpoly = ipoly({-1507, -10730, -1079, 23240, 14700});
    Alg a = Alg::generator(field_of(e.minpoly, Rational(-1493, 10000), Rational(-1491, 10000)));
    Alg den = q(32) * (q(35) * a + q(37));
    Alg b = -(q(7) * a + q(5)) * (q(70) * a + q(137)) / den;
    Alg c = -(q(5) * a + q(7)) * (q(70) * a + q(137)) / den;
    auto Q = unit_form(a, b, c, Rational(1));
    IntMatrix Y{{1, 0, 0, 5}, {0, 1, 0, 7}, {0, 0, 1, 8}};
    auto w = hull_weights(Y, Alg(Rational(1, 3)) * inverse(Q));
    if (!w)
        throw ConstructionError("quartic catalog entry: weights not found");
    e.data = assemble(Q, Y, *w);
    e.degree = 4;
    for (const auto& x : *w)
        e.weights_approx.push_back(x.to_double());
    e.expected_embedding = Embedding::embedded;
    return e;
}

inline const std::vector<std::pair<std::string, std::function<CatalogEntry()>>>& catalog_table()
{
    static const std::vector<std::pair<std::string, std::function<CatalogEntry()>>> t{
        {"clifford-3", clifford3}, {"ex-rank5", ex_rank5}, {"quadratic-s7", quadratic_s7},
        {"cubic-s7-a", cubic_a},   {"cubic-s7-b", cubic_b}, {"quartic-s7", quartic_s7}};
    return t;
}

} // namespace detail

inline std::vector<std::string> catalog_ids()
{
    std::vector<std::string> ids;
    for (const auto& [id, f] : detail::catalog_table())
        ids.push_back(id);
    return ids;
}

inline CatalogEntry catalog_entry(const std::string& id)
{
    for (const auto& [key, f] : detail::catalog_table())
        if (key == id)
            return f();
    throw UnsupportedError("unknown catalog id: " + id);
}

} // namespace tori
