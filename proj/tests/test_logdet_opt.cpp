#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tori;

namespace {

const IntMatrix exrank5_Y{{1, 0, 0, 6, 6}, {0, 1, 0, 12, 9}, {0, 0, 1, -15, -12}};

double ydot(const SymMatrix<double>& Q, const IntMatrix& Y, int j)
{
    double s = 0;
    for (int a = 0; a < Q.n(); ++a)
        for (int b = 0; b < Q.n(); ++b)
            s += Q(a, b) * static_cast<double>(Y(a, j) * Y(b, j));
    return s;
}

} // namespace

TEST(Slice, BasePointAndDirections)
{
    auto s = build_slice(exrank5_Y);
    EXPECT_EQ(s.s(), 1);
    for (int j = 0; j < 5; ++j) {
        auto y = column_of<Rational>(exrank5_Y, j);
        EXPECT_EQ(quad_form(s.Q0, y), 1);
        for (const auto& B : s.basis)
            EXPECT_EQ(quad_form(B, y), 0);
    }
    SymMatrix<Rational> Q1(3);
    Q1.set(0, 1, Rational(10)), Q1.set(0, 2, Rational(6)), Q1.set(1, 2, Rational(1));
    EXPECT_EQ(s.basis[0].matrix(), Q1.matrix());
    EXPECT_EQ(s.Q0(0, 1), Rational(-343, 1233));
    EXPECT_EQ(s.Q0(0, 2), Rational(397, 1233));
    EXPECT_EQ(s.Q0(1, 2), Rational(1048, 1233));
}

TEST(Slice, DimensionCountsRank)
{
    IntMatrix Y{{1, 0, 0, 5}, {0, 1, 0, 7}, {0, 0, 1, 8}};
    EXPECT_EQ(build_slice(Y).s(), 2);
    IntMatrix I{{1, 0}, {0, 1}};
    EXPECT_EQ(build_slice(I).s(), 1);
}

TEST(PencilOptimum, ExRank5ClosedForm)
{
    auto p = pencil_maximize(build_slice(exrank5_Y));
    EXPECT_EQ(p.degree, 2);
    double t0 = (39337 - 137 * std::sqrt(10801.0)) / 443880;
    EXPECT_NEAR(p.t0.to_double(), t0, 1e-14);
    IntPoly mp = p.t0.field()->minpoly();
    EXPECT_EQ(mp, (IntPoly{Integer(-10801), Integer(0), Integer(1)}));
}

TEST(WMaximizer, AgreesWithPencilAndIsStationary)
{
    auto slice = build_slice(exrank5_Y);
    auto w = maximize_logdet_W(slice);
    ASSERT_TRUE(w.feasible);
    EXPECT_LT(w.stationarity, 1e-9);
    auto p = pencil_maximize(slice);
    auto Qp = to_double(p.Qstar);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(w.Q(i, j), Qp(i, j), 1e-9);
    for (int j = 0; j < 5; ++j)
        EXPECT_NEAR(ydot(w.Q, exrank5_Y, j), 1, 1e-12);
}

TEST(WMaximizer, RandomStartsReachSameOptimum)
{
    IntMatrix Y{{1, 0, 0, 5}, {0, 1, 0, 7}, {0, 0, 1, 8}};
    auto slice = build_slice(Y);
    auto w = maximize_logdet_W(slice);
    ASSERT_TRUE(w.feasible);
    EXPECT_NEAR(w.Q(0, 1), -0.149201, 1e-6);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> G;
    for (int k = 0; k < 8; ++k) {
        Eigen::MatrixXd S = oracle::dense(w.Q);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
        for (const auto& B : slice.basis)
            D += G(rng) * oracle::dense(to_double(B));
        double eps = 0.5;
        while ((S + eps * D).llt().info() != Eigen::Success || (S + eps * D).eigenvalues().real().minCoeff() < 1e-3)
            eps /= 2;
        auto r = maximize_logdet_W(slice, 1e-10, 200, sym_from_eigen(S + eps * D));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                EXPECT_NEAR(r.Q(i, j), w.Q(i, j), 1e-8);
    }
}

TEST(WMaximizer, InfeasibleAndRigidSlices)
{
    // e1, e2, e1+e2 force Q11 = Q22 = 1, Q12 = -1/2: positive definite with s = 0
    IntMatrix Y{{1, 0, 1}, {0, 1, 1}};
    auto slice = build_slice(Y);
    EXPECT_EQ(slice.s(), 0);
    EXPECT_TRUE(maximize_logdet_W(slice).feasible);
    // (2,1,0) forces Q12 = -1, so the leading 2x2 block is singular on the whole slice
    IntMatrix Z{{1, 0, 0, 2}, {0, 1, 0, 1}, {0, 0, 1, 0}};
    auto sz = build_slice(Z);
    EXPECT_EQ(sz.s(), 2);
    EXPECT_FALSE(maximize_logdet_W(sz).feasible);
}

TEST(CMaximizer, KktGapAndWeights)
{
    auto h = maximize_logdet_C(exrank5_Y);
    EXPECT_LE(h.kkt_gap, 1e-8);
    double s = 0;
    for (double l : h.point.lambda) {
        EXPECT_GE(l, 0);
        s += l;
    }
    EXPECT_NEAR(s, 1, 1e-12);
}

TEST(CMaximizer, DualToWMaximizer)
{
    auto h = maximize_logdet_C(exrank5_Y);
    auto w = maximize_logdet_W(build_slice(exrank5_Y));
    Eigen::MatrixXd Pi = oracle::dense(w.Q).inverse() / 3;
    EXPECT_LE((oracle::dense(h.point.P) - Pi).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(CMaximizer, PlaneGridSearch)
{
    IntMatrix Y{{1, 0, 1}, {0, 1, 2}};
    auto h = maximize_logdet_C(Y);
    double v = logdet(h.point.P);
    EXPECT_NEAR(v, oracle::grid_logdet_n2(Y, 1e-2), 2e-3);
    EXPECT_GE(v, oracle::grid_logdet_n2(Y, 1e-2) - 1e-12);
}

TEST(HullWeights, ExactLinearProgram)
{
    auto Q = SymMatrix<Rational>::identity(3);
    IntMatrix Y{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto l = hull_weights(Y, Rational(1, 3) * Q);
    ASSERT_TRUE(l.has_value());
    for (const auto& x : *l)
        EXPECT_EQ(x, Rational(1, 3));
    auto T = Rational(1, 3) * Q;
    T.set(0, 1, Rational(1, 5));
    auto bad = hull_weights(Y, T);
    EXPECT_FALSE(bad.has_value());
}

TEST(Rank4, LagrangeCriticalPointsOfQuarticExample)
{
    auto crit = rank4_lagrange({Rational(5), Rational(7), Rational(8)});
    const auto& best = crit.best();
    EXPECT_EQ(best.degree, 4);
    EXPECT_NEAR(best.a.to_double(), -0.149201, 1e-6);
    EXPECT_LT(best.stationarity, 1e-9);
    EXPECT_TRUE(irreducible_degree_le4(best.minpoly));
}

TEST(Rank4, BlockDiagonalBranch)
{
    auto crit = rank4_lagrange({Rational(1), Rational(0), Rational(1)});
    EXPECT_TRUE(crit.block_diagonal);
    EXPECT_EQ(crit.best().b, AlgebraicNumber(Rational(-1, 2)));
}

TEST(Caratheodory, ReducesSupportAndKeepsMatrix)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        IntMatrix Y = oracle::random_Y(rng, 3, 12, 3);
        std::vector<Rational> lam(12, Rational(1, 12));
        HullPoint<Rational> hp{Y, lam, hull_matrix(Y, lam)};
        auto red = caratheodory_reduce(hp);
        EXPECT_LE(red.Y.cols(), 6);
        EXPECT_EQ(red.P.matrix(), hp.P.matrix());
        for (const auto& x : red.lambda)
            EXPECT_GT(x, 0);
    }
}
