#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tori;

namespace {

SymMatrix<Rational> quarter_form()
{
    SymMatrix<Rational> Q(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            Q.set(i, j, i == j ? Rational(1) : Rational(1, 4));
    return Q;
}

} // namespace

TEST(RationalPipeline, IdentityGivesVerifiedCertificates)
{
    std::set<Integer> mus;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto r = construct_rational({SymMatrix<Rational>::identity(3), 0, seed, 60});
        EXPECT_TRUE(verify_matrix_data(r.data).verified());
        EXPECT_GE(r.eigen_index, 1);
        for (int j = 0; j < r.data.N; ++j) {
            auto y = column_of<Rational>(r.data.Y, j);
            EXPECT_EQ(quad_form(r.data.Q, y), 1);
        }
        mus.insert(r.mu);
    }
    EXPECT_GE(mus.size(), 2u);
}

TEST(RationalPipeline, OtherForms)
{
    SymMatrix<Rational> D = SymMatrix<Rational>::identity(3);
    D.set(2, 2, Rational(4));
    auto r = construct_rational({D, 0, 7, 60});
    EXPECT_TRUE(verify_matrix_data(r.data).verified());
    EXPECT_GE(r.eigen_index, 1);
    auto q = construct_rational({quarter_form(), 0, 1, 60});
    EXPECT_TRUE(verify_matrix_data(q.data).verified());
}

TEST(RationalPipeline, Deterministic)
{
    auto a = construct_rational({SymMatrix<Rational>::identity(2), 0, 5, 60});
    auto b = construct_rational({SymMatrix<Rational>::identity(2), 0, 5, 60});
    EXPECT_EQ(a.data.Y.select_cols({0}), b.data.Y.select_cols({0}));
    EXPECT_EQ(a.mu, b.mu);
    EXPECT_EQ(a.data.weights, b.data.weights);
}

TEST(RationalPipeline, RejectsIndefiniteInput)
{
    SymMatrix<Rational> Q = SymMatrix<Rational>::identity(2);
    Q.set(1, 1, Rational(-1));
    EXPECT_THROW(construct_rational({Q, 0, 1, 60}), NotPositiveDefiniteError);
}

TEST(Pencil, ExRank5MatchesCatalog)
{
    auto cat = catalog_entry("ex-rank5");
    auto p = construct_pencil_3torus(cat.data.Y, PencilKind::rank5);
    EXPECT_EQ(p.degree, 2);
    EXPECT_EQ(p.minpoly, (IntPoly{Integer(-10801), Integer(0), Integer(1)}));
    ASSERT_EQ(p.data.N, 5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_EQ(p.data.Q(i, j), cat.data.Q(i, j));
    for (int j = 0; j < 5; ++j)
        EXPECT_EQ(p.data.weights[j], cat.data.weights[j]);
}

TEST(Pencil, Rank4QuarticAndQuadratic)
{
    IntMatrix Y{{1, 0, 0, 5}, {0, 1, 0, 7}, {0, 0, 1, 8}};
    auto p = construct_pencil_3torus(Y, PencilKind::rank4);
    EXPECT_EQ(p.degree, 4);
    EXPECT_NEAR(p.data.Q(0, 1).to_double(), -0.149201, 1e-6);
    auto cat = catalog_entry("quartic-s7");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(p.data.Q(i, j).to_double(), cat.data.Q(i, j).to_double(), 1e-12);

    auto q = construct_pencil_3torus(catalog_entry("quadratic-s7").data.Y, PencilKind::rank4);
    EXPECT_EQ(q.degree, 2);
    EXPECT_EQ(q.minpoly, (IntPoly{Integer(-553), Integer(0), Integer(1)}));
    auto qc = catalog_entry("quadratic-s7");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_EQ(q.data.Q(i, j), qc.data.Q(i, j));
}

TEST(Pencil, CubicExamplesReproduced)
{
    for (const char* id : {"cubic-s7-a", "cubic-s7-b"}) {
        auto cat = catalog_entry(id);
        auto p = construct_pencil_3torus(cat.data.Y, PencilKind::rank4);
        EXPECT_EQ(p.degree, 3) << id;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                EXPECT_NEAR(p.data.Q(i, j).to_double(), cat.data.Q(i, j).to_double(), 1e-12) << id;
    }
}

TEST(Pencil, WrongRankRejected)
{
    IntMatrix Y{{1, 0, 0, 5}, {0, 1, 0, 7}, {0, 0, 1, 8}};
    EXPECT_THROW(construct_pencil_3torus(Y, PencilKind::rank5), DimensionError);
}

TEST(Pythagorean, CentroidSatisfiesConstraints)
{
    auto a = pythagorean_vertex_centroid(3, 4, 5);
    auto C = pythagorean_constraints(3, 4, 5);
    for (int i = 0; i < 5; ++i) {
        Rational s = 0;
        for (int j = 0; j < 12; ++j)
            s += C(i, j) * a[j];
        EXPECT_EQ(s, C(i, 12));
    }
    Rational sum = 0;
    for (const auto& x : a) {
        EXPECT_GT(x, 0);
        sum += x;
    }
    EXPECT_EQ(sum, 1);
}

TEST(Pythagorean, NonHomogeneousMemberVerifies)
{
    PythagoreanParams P;
    P.R1 = 0.01;
    auto F = pythagorean_family(P);
    EXPECT_FALSE(is_homogeneous(F.gram));
    EXPECT_TRUE(verify_full(F.gram, to_double(F.Q), F.Y).verified());
    for (double t : {0.25, 0.5, 0.75})
        EXPECT_TRUE(verify_full(deformation_path(F.gram, F.gram.diagonal_part(), t), to_double(F.Q), F.Y).verified());
}

TEST(Pythagorean, GeneralAnglesVerify)
{
    PythagoreanParams P;
    P.R1 = 0.01, P.R2 = 0.008, P.phi1 = 0.3, P.psi1 = 1.2, P.phi2 = -0.7, P.psi2 = 2.0;
    auto F = pythagorean_family(P);
    EXPECT_TRUE(verify_full(F.gram, to_double(F.Q), F.Y).verified());
}

TEST(Pythagorean, InvalidParameters)
{
    PythagoreanParams P;
    P.R1 = 10;
    EXPECT_THROW(pythagorean_family(P), Error);
    PythagoreanParams Q;
    Q.p = 6, Q.q = 8, Q.r = 10;
    EXPECT_THROW(pythagorean_family(Q), Error);
    // 65 is the hypotenuse of two primitive triples
    PythagoreanParams R;
    R.p = 16, R.q = 63, R.r = 65;
    EXPECT_THROW(pythagorean_family(R), Error);
    EXPECT_EQ(primitive_triples_with_hypotenuse(65), 2);
    EXPECT_EQ(primitive_triples_with_hypotenuse(5), 1);
}

TEST(Bryant, EndpointsAndInterior)
{
    auto b0 = bryant_2torus(Bryant2TorusParams::from_rho_over_b(1, 3, Rational(0)));
    EXPECT_EQ(b0.data.N, 3);
    EXPECT_EQ(b0.r2, (std::vector<Rational>{Rational(7, 16), Rational(9, 32), Rational(9, 32), Rational(0)}));
    auto bm = bryant_2torus(Bryant2TorusParams::from_rho_over_b(1, 3, Rational(1, 4)));
    EXPECT_EQ(bm.data.N, 4);
    EXPECT_EQ(bm.r2, (std::vector<Rational>{Rational(51, 128), Rational(27, 128), Rational(41, 128), Rational(9, 128)}));
    auto b1 = bryant_2torus(Bryant2TorusParams::from_rho_over_b(1, 3, Rational(1, 2)));
    EXPECT_EQ(b1.data.N, 3);
    EXPECT_EQ(b1.r2[1], 0);
    for (const auto* b : {&b0, &bm, &b1})
        for (double e : b->equation_residuals)
            EXPECT_LE(e, 1e-12);
}

TEST(Bryant, OtherRatiosAndRange)
{
    auto b = bryant_2torus(Bryant2TorusParams::from_rho_over_b(2, 5, Rational(1, 3)));
    EXPECT_TRUE(verify_matrix_data(b.data).verified());
    EXPECT_THROW(bryant_2torus(Bryant2TorusParams::from_rho_over_b(1, 3, Rational(1))), Error);
    EXPECT_THROW(bryant_2torus(Bryant2TorusParams::from_rho_over_b(1, 2, Rational(0))), Error);
}

TEST(Catalog, AllEntriesVerifyWithDocumentedEmbedding)
{
    auto ids = catalog_ids();
    EXPECT_EQ(ids.size(), 6u);
    for (const auto& id : ids) {
        auto e = catalog_entry(id);
        EXPECT_TRUE(verify_matrix_data(e.data).verified()) << id;
        if (e.expected_embedding != Embedding::unknown)
            EXPECT_EQ(embeddedness(e.data.Y).status, e.expected_embedding) << id;
        for (int j = 0; j < e.data.N; ++j)
            EXPECT_NEAR(e.data.weights[j].to_double(), e.weights_approx[j], 1e-15);
    }
    EXPECT_THROW(catalog_entry("nope"), UnsupportedError);
}

TEST(Catalog, CubicBWeightNumerics)
{
    auto e = catalog_entry("cubic-s7-b");
    std::vector<double> want{0.0733429, 0.31128, 0.291462, 0.323914};
    for (int j = 0; j < 4; ++j)
        EXPECT_NEAR(e.data.weights[j].to_double(), want[j], 5e-6 * want[j]);
}
