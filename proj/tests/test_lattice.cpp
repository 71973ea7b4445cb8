#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tori;

TEST(Lattice, DualGramIsInverse)
{
    Matrix<Rational> L{{Rational(2), Rational(0)}, {Rational(1), Rational(3)}};
    auto lat = make_lattice(L);
    auto d = dual(lat);
    auto I = lat.gram.matrix() * d.gram.matrix();
    EXPECT_EQ(I(0, 0), 1);
    EXPECT_EQ(I(0, 1), 0);
    EXPECT_EQ(I(1, 1), 1);
    Matrix<Rational> S{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
    EXPECT_THROW(dual(make_lattice(S)), SingularMatrixError);
}

TEST(Lattice, CubicLatticeUnitVectors)
{
    auto l = enumerate_norm(SymMatrix<Rational>::identity(3), Rational(1));
    EXPECT_TRUE(l.complete);
    EXPECT_EQ(l.classes.size(), 3u);
    auto l2 = enumerate_norm(SymMatrix<Rational>::identity(3), Rational(2));
    EXPECT_EQ(l2.classes.size(), 6u);
    for (const auto& v : l2.classes)
        EXPECT_TRUE(is_canonical(v));
}

TEST(Lattice, PythagoreanFormHasTwelveUnitClasses)
{
    SymMatrix<Rational> Q(3);
    Q.set(0, 0, Rational(1, 3));
    Q.set(1, 1, Rational(2, 75));
    Q.set(2, 2, Rational(2, 75));
    auto l = enumerate_norm(Q, Rational(1));
    EXPECT_EQ(l.classes.size(), 12u);
}

TEST(Lattice, EnumerationMatchesBoxScan)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + t % 3;
        auto Q = oracle::random_pd(rng, n);
        IntVector y(n);
        std::uniform_int_distribution<int> U(-2, 2);
        do
            for (auto& v : y)
                v = U(rng);
        while (std::all_of(y.begin(), y.end(), [](long long v) { return v == 0; }));
        Rational target = oracle::quad(Q, y);
        auto l = enumerate_norm(Q, target);
        std::set<IntVector> got(l.classes.begin(), l.classes.end());
        EXPECT_EQ(got, oracle::brute_force_norm(Q, target)) << "case " << t;
        EXPECT_EQ(got.size(), l.classes.size());
    }
}

TEST(Lattice, ShortestVectorsOfHexagonalForm)
{
    SymMatrix<Rational> Q(2);
    Q.set(0, 0, Rational(1));
    Q.set(1, 1, Rational(1));
    Q.set(0, 1, Rational(1, 2));
    auto [m, l] = shortest_vectors(Q);
    EXPECT_EQ(m, 1);
    EXPECT_EQ(l.classes.size(), 3u);
}

TEST(Lattice, SpectrumAndIndex)
{
    SymMatrix<Rational> Q(2);
    Q.set(0, 0, Rational(1));
    Q.set(1, 1, Rational(4));
    auto sp = spectrum(Q, 4);
    ASSERT_EQ(sp.size(), 4u);
    EXPECT_EQ(sp[0].multiplicity, 1);
    EXPECT_EQ(sp[1].norm, 1);
    EXPECT_EQ(sp[1].multiplicity, 2);
    EXPECT_EQ(sp[2].norm, 4);
    EXPECT_EQ(sp[2].multiplicity, 4);
    EXPECT_EQ(sp[3].norm, 5);
    EXPECT_NEAR(sp[1].eigenvalue, 4 * std::numbers::pi * std::numbers::pi, 1e-12);
    EXPECT_EQ(eigenfunction_index(Q, Rational(4)), 2);
    EXPECT_THROW(eigenfunction_index(Q, Rational(3)), Error);
}

TEST(Lattice, IndexGrowsWithScaling)
{
    auto I = SymMatrix<Rational>::identity(3);
    int prev = 0;
    for (long mu : {1, 2, 3, 5}) {
        auto Qm = Rational(1, mu * mu) * I;
        int k = eigenfunction_index(Qm, Rational(1));
        EXPECT_GT(k, prev);
        prev = k;
    }
}

TEST(Lattice, NonPositiveFormsRejected)
{
    SymMatrix<Rational> Q(2);
    Q.set(0, 0, Rational(1));
    Q.set(1, 1, Rational(-1));
    EXPECT_THROW(enumerate_norm(Q, Rational(1)), NotPositiveDefiniteError);
}

TEST(Lattice, FloatingEnumerationAgreesWithExact)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 10; ++t) {
        auto Q = oracle::random_pd(rng, 3);
        Rational target = Q(0, 0);
        auto ex = enumerate_norm(Q, target);
        auto fl = enumerate_norm(to_double(Q), target.get_d());
        std::set<IntVector> a(ex.classes.begin(), ex.classes.end()), b(fl.classes.begin(), fl.classes.end());
        EXPECT_EQ(a, b);
    }
}

TEST(Sampler, PointsAreRationalAndOnTheEllipsoid)
{
    SymMatrix<Rational> Q(3);
    Q.set(0, 0, Rational(1)), Q.set(1, 1, Rational(1)), Q.set(2, 2, Rational(1));
    Q.set(0, 1, Rational(1, 4)), Q.set(0, 2, Rational(1, 4)), Q.set(1, 2, Rational(1, 4));
    RatVector u0{Rational(1), Rational(0), Rational(0)};
    auto pts = rational_points_on_ellipsoid(Q, u0, 30, 7);
    EXPECT_EQ(pts.size(), 30u);
    for (const auto& p : pts)
        EXPECT_EQ(quad_form(Q, p), 1);
    auto again = rational_points_on_ellipsoid(Q, u0, 30, 7);
    EXPECT_EQ(pts, again);
    auto other = rational_points_on_ellipsoid(Q, u0, 30, 8);
    EXPECT_NE(pts, other);
}
