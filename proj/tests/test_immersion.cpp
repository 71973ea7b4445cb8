#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tori;

namespace {

MatrixData<Rational> clifford(int n)
{
    MatrixData<Rational> d;
    d.n = d.N = n;
    d.Q = SymMatrix<Rational>::identity(n);
    d.Y = IntMatrix(n, n);
    for (int i = 0; i < n; ++i)
        d.Y(i, i) = 1;
    d.weights.assign(n, Rational(1, n));
    return d;
}

// Y for the (3,4,5) family, Q = diag(1/3, 2/75, 2/75)
const IntMatrix& pyth_Y()
{
    static const IntMatrix Y = pythagorean_Y(3, 4, 5);
    return Y;
}

} // namespace

TEST(Verify, CliffordTorusIsExactlyVerified)
{
    for (int n = 1; n <= 4; ++n) {
        auto r = verify_matrix_data(clifford(n));
        EXPECT_TRUE(r.verified()) << n;
        EXPECT_TRUE(r.exact);
    }
}

TEST(Verify, TamperingNamesTheEquation)
{
    auto d = clifford(3);
    d.weights[0] = Rational(1, 2);
    d.weights[1] = Rational(1, 6);
    auto r = verify_matrix_data(d);
    EXPECT_EQ(r.verdict, Verdict::falsified);
    EXPECT_EQ(r.reason, "flat");

    auto e = clifford(3);
    e.Y(0, 0) = 2;
    EXPECT_EQ(verify_matrix_data(e).reason, "ellipsoid");

    auto f = clifford(3);
    f.Y(0, 1) = 1, f.Y(1, 1) = 0;
    EXPECT_EQ(verify_matrix_data(f).reason, "structure");
}

TEST(Verify, FloatingToleranceBands)
{
    auto d = cast_data<double>(clifford(3));
    EXPECT_TRUE(verify_matrix_data(d).verified());
    d.weights[0] += 5e-9;
    d.weights[1] -= 5e-9;
    auto r = verify_matrix_data(d, 1e-10);
    EXPECT_EQ(r.verdict, Verdict::indeterminate);
    EXPECT_EQ(verify_matrix_data(d, 1e-8).verdict, Verdict::verified);
    d.weights[0] += 1e-3;
    d.weights[1] -= 1e-3;
    EXPECT_EQ(verify_matrix_data(d).verdict, Verdict::falsified);
}

TEST(Verify, IndependentResidualAgrees)
{
    for (const auto& id : catalog_ids()) {
        auto e = catalog_entry(id);
        auto dd = cast_data<double>(e.data);
        EXPECT_LT(oracle::homogeneous_residual(dd.Q, dd.Y, dd.weights), 1e-10L) << id;
        EXPECT_TRUE(verify_matrix_data(e.data).verified()) << id;
    }
}

TEST(EtaSets, PythagoreanHasOneSixPairSet)
{
    auto E = eta_sets(pyth_Y());
    int six = 0;
    IntVector at;
    std::size_t total = 0;
    for (const auto& [eta, pairs] : E) {
        total += pairs.size();
        if (pairs.size() == 6) {
            ++six;
            at = eta;
        }
        EXPECT_TRUE(is_canonical(eta));
    }
    EXPECT_EQ(six, 1);
    EXPECT_EQ(at, (IntVector{2, 0, 0}));
    EXPECT_EQ(total, 12u * 11u);
}

TEST(EtaSets, PairsRealiseTheirKey)
{
    IntMatrix Y{{1, 0, 1}, {0, 1, 1}};
    for (const auto& [eta, pairs] : eta_sets(Y))
        for (const auto& p : pairs)
            for (int i = 0; i < 2; ++i)
                EXPECT_EQ(Y(i, p.r) + p.sigma * Y(i, p.s), p.epsilon * eta[i]);
}

TEST(FullSystem, DiagonalLiftMatchesHomogeneousCheck)
{
    for (const auto& id : catalog_ids()) {
        auto e = catalog_entry(id);
        auto g = diagonal_lift(e.data);
        auto r = verify_full(g, to_double(e.data.Q), e.data.Y);
        EXPECT_TRUE(r.verified()) << id << " " << r.reason;
        EXPECT_TRUE(is_homogeneous(g));
    }
}

TEST(FullSystem, OffDiagonalBlockBreaksEigenEquations)
{
    auto d = clifford(3);
    auto g = diagonal_lift(d);
    Eigen::Matrix2d B;
    B << 0.01, 0, 0, 0.01;
    g.set_block(0, 1, B);
    auto r = verify_full(g, to_double(d.Q), d.Y);
    EXPECT_EQ(r.verdict, Verdict::falsified);
    EXPECT_EQ(r.reason, "eigen-cos");
}

TEST(FullSystem, DeformationPathEndpoints)
{
    auto g0 = diagonal_lift(clifford(2));
    auto g1 = GramOperator::diagonal({0.5, 0.5});
    auto mid = deformation_path(g0, g1, 0.5);
    EXPECT_NEAR(mid.diagonal_value(0), 0.5, 1e-15);
    EXPECT_THROW(deformation_path(g0, g1, 1.5), Error);
}

TEST(Embedding, UnitMinorAndWitness)
{
    EXPECT_EQ(embeddedness(clifford(3).Y).status, Embedding::embedded);
    IntMatrix Y2{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
    auto e = embeddedness(Y2);
    EXPECT_EQ(e.status, Embedding::not_embedded);
    EXPECT_EQ(e.witness, (std::vector<Rational>{Rational(1, 2), Rational(0), Rational(0)}));
    auto p = embeddedness(pyth_Y(), true);
    EXPECT_EQ(p.status, Embedding::not_embedded);
    EXPECT_EQ(p.witness, (std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(embeddedness(pyth_Y(), false).status, Embedding::unknown);
}

TEST(Embedding, ExhaustiveSearchFindsNoCollapse)
{
    // no unit minor, yet 2u and 3u integral forces u = 0
    IntMatrix Y{{2, 3}};
    EXPECT_EQ(embeddedness(Y).status, Embedding::unknown);
    auto e = embeddedness(Y, true);
    EXPECT_EQ(e.status, Embedding::embedded);
    EXPECT_EQ(e.method, "exhaustive");
}

TEST(Evaluate, ImageLiesOnTheUnitSphere)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& id : catalog_ids()) {
        auto e = catalog_entry(id);
        auto x = Immersion::from_data(e.data);
        for (int k = 0; k < 25; ++k) {
            Eigen::VectorXd u(e.data.n);
            for (int i = 0; i < e.data.n; ++i)
                u(i) = U(rng);
            EXPECT_NEAR(evaluate_immersion(x, u).norm(), 1, 1e-10) << id;
        }
    }
}

TEST(Evaluate, JacobianIsConformalWithTheRightScale)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    auto e = catalog_entry("ex-rank5");
    auto x = Immersion::from_data(e.data);
    double c = 4 * std::numbers::pi * std::numbers::pi / 3;
    for (int k = 0; k < 5; ++k) {
        Eigen::VectorXd w(3);
        for (int i = 0; i < 3; ++i)
            w(i) = U(rng);
        auto G = oracle::jacobian_gram(x, w);
        EXPECT_LE((G - c * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-6 * c);
    }
}

TEST(Evaluate, RefusesUnverifiedData)
{
    auto d = clifford(2);
    d.weights[0] = Rational(3, 4), d.weights[1] = Rational(1, 4);
    EXPECT_THROW(Immersion::from_data(d), Error);
}

TEST(Reduce, TargetDimensionBound)
{
    PythagoreanFamily F = pythagorean_family({});
    auto h = F.homogeneous();
    ASSERT_TRUE(verify_matrix_data(h).verified());
    auto r = reduce_target_dimension(h);
    EXPECT_LE(r.N, 6);
    EXPECT_TRUE(verify_matrix_data(r).verified());
    EXPECT_EQ(hull_matrix(r.Y, r.weights).matrix(), hull_matrix(h.Y, h.weights).matrix());
    auto c = clifford(3);
    EXPECT_EQ(reduce_target_dimension(c).N, 3);
}
