#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "algebraic.hpp"
#include "errors.hpp"
#include "immersion.hpp"
#include "lattice.hpp"
#include "logdet_opt.hpp"
#include "simplex.hpp"

namespace tori {

// ---------------------------------------------------------------- rational tori

struct RationalPipelineConfig {
    SymMatrix<Rational> Q;
    int sample_count = 0; // 0: four times dim Sym_n
    std::uint64_t seed = 1;
    long long max_denominator = 60;
};

struct RationalConstruction {
    MatrixData<Rational> data;
    Integer mu;                  // Y = mu * R, data.Q = (Q / Q_11) / mu^2
    Rational scale;              // Q_11
    int eigen_index = 0;         // index of the norm-1 value on the certificate lattice
    int points_sampled = 0;
};

namespace detail {

inline bool spans_sym(const std::vector<RatVector>& pts, int n)
{
    int dim = sym_dim(n);
    if (static_cast<int>(pts.size()) < dim)
        return false;
    Matrix<Rational> V(dim, static_cast<int>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) {
        auto v = sym_vector(outer(pts[j]));
        for (int k = 0; k < dim; ++k)
            V(k, static_cast<int>(j)) = v[k];
    }
    return rank(V) == dim;
}

inline RatVector negated(RatVector v)
{
    for (auto& x : v)
        x = -x;
    return v;
}

} // namespace detail

inline RationalConstruction construct_rational(const RationalPipelineConfig& cfg)
{
    int n = cfg.Q.n();
    if (!exact_positive_definite(cfg.Q))
        throw NotPositiveDefiniteError("construct_rational needs a positive definite Q");
    if (cfg.max_denominator < 1)
        throw Error("max_denominator must be positive");
    int want = cfg.sample_count > 0 ? cfg.sample_count : 4 * sym_dim(n);
    if (want < sym_dim(n))
        throw Error("sample_count below dim Sym_n");
    Rational s = cfg.Q(0, 0);
    SymMatrix<Rational> Qs = (Rational(1) / s) * cfg.Q;
    RatVector u0(n, Rational(0));
    u0[0] = 1;

    EllipsoidSampler sampler(Qs, u0, cfg.seed);
    std::vector<RatVector> pts{u0};
    Integer mu = 1;
    long attempts = 0;
    const long max_attempts = 400L * want + 4000;
    while (static_cast<int>(pts.size()) < want || !detail::spans_sym(pts, n)) {
        if (++attempts > max_attempts) {
            if (detail::spans_sym(pts, n))
                break;
            throw ConstructionError("could not sample enough points under the denominator cap; retry with a larger cap");
        }
        RatVector u = sampler.next();
        Integer l = mu;
        for (const auto& x : u)
            l = lcm_of(l, x.get_den());
        if (l > Integer(static_cast<long>(cfg.max_denominator)))
            continue;
        if (std::find(pts.begin(), pts.end(), u) != pts.end() || std::find(pts.begin(), pts.end(), detail::negated(u)) != pts.end())
            continue;
        pts.push_back(u);
        mu = l;
    }

    int N = static_cast<int>(pts.size());
    IntMatrix Y(n, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < n; ++i) {
            Rational v = pts[j][i] * Rational(mu);
            Y(i, j) = v.get_num().get_si();
        }
    SymMatrix<Rational> Qc = (Rational(1) / Rational(mu * mu)) * Qs;
    SymMatrix<Rational> target = (Rational(1, n)) * inverse(Qc);
    auto lam = hull_weights(Y, target);
    if (!lam)
        throw ConstructionError("linear program infeasible; retry with more samples");
    std::vector<int> keep;
    for (int j = 0; j < N; ++j)
        if ((*lam)[j] != 0)
            keep.push_back(j);
    RationalConstruction out;
    out.data.n = n;
    out.data.N = static_cast<int>(keep.size());
    out.data.Q = Qc;
    out.data.Y = Y.select_cols(keep);
    for (int j : keep)
        out.data.weights.push_back((*lam)[j]);
    out.mu = mu;
    out.scale = s;
    out.points_sampled = N;
    if (!verify_matrix_data(out.data).verified())
        throw ConstructionError("rational construction failed verification");
    out.eigen_index = eigenfunction_index(Qc, Rational(1));
    return out;
}

// ---------------------------------------------------------------- pencil / rank four

enum class PencilKind { rank5, rank4 };

struct PencilConstruction {
    MatrixData<AlgebraicNumber> data;
    int degree = 1;
    IntPoly minpoly;        // of the field generator (x for rational results)
    AlgebraicNumber t0;     // rank5: pencil parameter; rank4: the entry a of the normalized form
    std::optional<Rational> discriminant_quantity;
};

inline PencilConstruction construct_pencil_3torus(const IntMatrix& Y, PencilKind kind)
{
    if (Y.rows() != 3)
        throw DimensionError("pencil construction is for 3-tori");
    if (rank(Y) != 3)
        throw DimensionError("Y must have rank 3");
    auto slice = build_slice(Y);
    int rk = sym_dim(3) - slice.s();
    PencilConstruction out;
    SymMatrix<AlgebraicNumber> Q;
    FieldPtr field;
    if (kind == PencilKind::rank5) {
        if (rk != 5)
            throw DimensionError("rank5 construction needs rank{Y_j Y_j^t} = 5");
        auto p = pencil_maximize(slice);
        Q = p.Qstar;
        out.t0 = p.t0;
        out.degree = p.degree;
        out.discriminant_quantity = p.discriminant_quantity;
        field = p.t0.field();
    } else {
        if (rk != 4 || Y.cols() != 4)
            throw DimensionError("rank4 construction needs four columns with rank{Y_j Y_j^t} = 4");
        // first three columns become the unit vectors
        Matrix<Rational> G = Y.select_cols({0, 1, 2}).cast<Rational>();
        if (determinant(G) == 0)
            throw DimensionError("first three columns of Y must be independent");
        Matrix<Rational> Gi = inverse(G);
        Matrix<Rational> y4 = Gi * Y.select_cols({3}).cast<Rational>();
        auto crit = rank4_lagrange({y4(0, 0), y4(1, 0), y4(2, 0)});
        const auto& c = crit.best();
        Matrix<AlgebraicNumber> Gia = Gi.cast<AlgebraicNumber>();
        Matrix<AlgebraicNumber> Qm = Gia.transpose() * c.Q.matrix() * Gia;
        Q = SymMatrix<AlgebraicNumber>(Qm);
        out.t0 = c.a;
        out.degree = c.degree;
        field = c.a.field();
    }
    out.minpoly = field ? field->minpoly() : IntPoly{Integer(0), Integer(1)};
    SymMatrix<AlgebraicNumber> target = AlgebraicNumber(Rational(1, 3)) * inverse(Q);
    auto lam = hull_weights(Y, target);
    if (!lam)
        throw ConstructionError("Q*^{-1}/3 is not in the convex hull of the Y_j Y_j^t");
    std::vector<int> keep;
    for (int j = 0; j < Y.cols(); ++j)
        if (!(*lam)[j].is_zero())
            keep.push_back(j);
    out.data.n = 3;
    out.data.N = static_cast<int>(keep.size());
    out.data.Q = Q;
    out.data.Y = Y.select_cols(keep);
    for (int j : keep)
        out.data.weights.push_back((*lam)[j]);
    if (!verify_matrix_data(out.data).verified())
        throw ConstructionError("pencil construction failed verification");
    return out;
}

// ---------------------------------------------------------------- Pythagorean family

struct PythagoreanParams {
    long long p = 3, q = 4, r = 5;
    std::vector<Rational> a; // empty: vertex centroid
    double R1 = 0, R2 = 0, phi1 = 0, phi2 = 0, psi1 = 0, psi2 = 0;
};

struct PythagoreanFamily {
    GramOperator gram;
    SymMatrix<Rational> Q;
    IntMatrix Y;
    std::vector<Rational> a;
    std::vector<double> alpha, beta;

    MatrixData<Rational> homogeneous() const
    {
        MatrixData<Rational> d;
        d.n = 3;
        d.N = 12;
        d.Q = Q;
        d.Y = Y;
        d.weights = a;
        return d;
    }
};

inline int primitive_triples_with_hypotenuse(long long r)
{
    int count = 0;
    for (long long m = 1; m * m < r; ++m)
        for (long long k = 1; k < m; ++k)
            if (m * m + k * k == r && std::gcd(m, k) == 1 && (m - k) % 2 == 1)
                ++count;
    return count;
}

inline IntMatrix pythagorean_Y(long long p, long long q, long long r)
{
    IntMatrix Y(3, 12, 1);
    long long row1[12] = {r, -r, 0, 0, p, -p, -q, q, p, -p, q, -q};
    long long row2[12] = {0, 0, r, -r, q, -q, p, -p, -q, q, p, -p};
    for (int j = 0; j < 12; ++j) {
        Y(1, j) = row1[j];
        Y(2, j) = row2[j];
    }
    return Y;
}

// five linear constraints on a_1..a_12 (rows), right-hand side in the last column
inline Matrix<Rational> pythagorean_constraints(long long p_, long long q_, long long r_)
{
    Rational p(static_cast<long>(p_)), q(static_cast<long>(q_)), r(static_cast<long>(r_));
    Rational r2 = 2 * r * r;
    Rational pp = p * (p + r) / r2, pm = p * (p - r) / r2, qp = q * (q + r) / r2, qm = q * (q - r) / r2;
    Matrix<Rational> A(5, 13, Rational(0));
    auto at = [&](int row, int idx1, const Rational& v) { A(row, idx1 - 1) += v; };
    for (int k : {5, 6, 11, 12})
        at(0, k, 1);
    for (int k : {7, 8, 9, 10})
        at(0, k, -1);
    at(1, 1, 1), at(1, 5, pp), at(1, 9, pp), at(1, 6, pm), at(1, 10, pm), at(1, 8, qp), at(1, 11, qp), at(1, 7, qm), at(1, 12, qm);
    at(2, 3, 1), at(2, 5, qp), at(2, 10, qp), at(2, 6, qm), at(2, 9, qm), at(2, 7, pp), at(2, 11, pp), at(2, 8, pm), at(2, 12, pm);
    at(3, 2, 1), at(3, 5, pm), at(3, 9, pm), at(3, 6, pp), at(3, 10, pp), at(3, 8, qm), at(3, 11, qm), at(3, 7, qp), at(3, 12, qp);
    at(4, 4, 1), at(4, 5, qm), at(4, 10, qm), at(4, 6, qp), at(4, 9, qp), at(4, 7, pm), at(4, 11, pm), at(4, 8, pp), at(4, 12, pp);
    for (int row = 1; row < 5; ++row)
        A(row, 12) = Rational(1, 4);
    return A;
}

// average of the vertices of { a >= 0 : constraints }
inline std::vector<Rational> pythagorean_vertex_centroid(long long p, long long q, long long r)
{
    Matrix<Rational> C = pythagorean_constraints(p, q, r);
    std::vector<int> all(12);
    std::iota(all.begin(), all.end(), 0);
    Matrix<Rational> A(5, 12);
    Matrix<Rational> b(5, 1);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 12; ++j)
            A(i, j) = C(i, j);
        b(i, 0) = C(i, 12);
    }
    std::vector<std::vector<Rational>> verts;
    std::vector<int> comb{0, 1, 2, 3, 4};
    do {
        Matrix<Rational> B = A.select_cols(comb);
        if (determinant(B) == 0)
            continue;
        Matrix<Rational> x = solve(B, b);
        bool ok = true;
        for (int i = 0; i < 5; ++i)
            if (x(i, 0) < 0)
                ok = false;
        if (!ok)
            continue;
        std::vector<Rational> v(12, Rational(0));
        for (int i = 0; i < 5; ++i)
            v[comb[i]] = x(i, 0);
        if (std::find(verts.begin(), verts.end(), v) == verts.end())
            verts.push_back(v);
    } while (detail::next_combination(comb, 12));
    if (verts.empty())
        throw ConstructionError("diagonal polytope is empty");
    std::vector<Rational> c(12, Rational(0));
    for (const auto& v : verts)
        for (int j = 0; j < 12; ++j)
            c[j] += v[j];
    for (auto& x : c)
        x /= Rational(static_cast<long>(verts.size()));
    return c;
}

inline PythagoreanFamily pythagorean_family(const PythagoreanParams& P)
{
    long long p = P.p, q = P.q, r = P.r;
    if (!(0 < p && p < q && q < r) || p * p + q * q != r * r || std::gcd(std::gcd(p, q), r) != 1)
        throw Error("not a primitive Pythagorean triple with p < q");
    if (r <= 10000 && primitive_triples_with_hypotenuse(r) != 1)
        throw Error("r is the hypotenuse of another primitive triple");
    PythagoreanFamily F;
    F.Y = pythagorean_Y(p, q, r);
    Rational rr(static_cast<long>(r * r));
    F.Q = SymMatrix<Rational>(3);
    F.Q.set(0, 0, Rational(1, 3));
    F.Q.set(1, 1, Rational(2) / (3 * rr));
    F.Q.set(2, 2, Rational(2) / (3 * rr));
    F.a = P.a.empty() ? pythagorean_vertex_centroid(p, q, r) : P.a;
    if (F.a.size() != 12)
        throw DimensionError("twelve diagonal values expected");
    Matrix<Rational> C = pythagorean_constraints(p, q, r);
    for (int i = 0; i < 5; ++i) {
        Rational s = 0;
        for (int j = 0; j < 12; ++j)
            s += C(i, j) * F.a[j];
        if (s != C(i, 12))
            throw Error("diagonal values violate the linear constraints");
    }
    for (const auto& x : F.a)
        if (x <= 0)
            throw Error("diagonal values must be positive");

    double k = static_cast<double>(p * p - q * q) / static_cast<double>(r * r);
    auto coeffs = [&](double R, double phi, double psi) {
        double cp = std::cos(phi) * std::cos(phi), cs = std::cos(psi) * std::cos(psi);
        double sp = std::sin(phi) * std::sin(phi), ss = std::sin(psi) * std::sin(psi);
        return std::vector<double>{-R * (1 + k * (cp - cs)), -R * (1 + k * (cs - cp)), R * cp, R * cs, R * ss, R * sp};
    };
    F.alpha = coeffs(P.R1, P.phi1, P.psi1);
    F.beta = coeffs(P.R2, P.phi2, P.psi2);
    F.gram = GramOperator(12);
    for (int j = 0; j < 12; ++j)
        F.gram.set_diagonal(j, F.a[j].get_d());
    for (int i = 0; i < 6; ++i) {
        double al = F.alpha[i], be = F.beta[i];
        if (al * al + be * be > F.a[2 * i].get_d() * F.a[2 * i + 1].get_d())
            throw Error("PSD bound violated: alpha^2 + beta^2 > a_{2i-1} a_{2i}");
        Eigen::Matrix2d B;
        B << al, be, be, -al;
        F.gram.set_block(2 * i, 2 * i + 1, B);
    }
    if (!verify_full(F.gram, to_double(F.Q), F.Y).verified())
        throw ConstructionError("Pythagorean operator failed verification");
    return F;
}

// ---------------------------------------------------------------- Bryant 2-tori

struct Bryant2TorusParams {
    long long m = 1, n = 3;
    Rational rho2; // rho^2

    Rational a() const { return make_rational(Integer(static_cast<long>(m)), Integer(static_cast<long>(n))); }
    Rational b2() const { return 1 - a() * a(); }
    Rational rho2_max() const { return 1 / (4 * b2()); }

    // rho = t / b
    static Bryant2TorusParams from_rho_over_b(long long m, long long n, const Rational& t)
    {
        Bryant2TorusParams P{m, n, Rational(0)};
        P.rho2 = t * t / P.b2();
        return P;
    }
};

struct BryantConstruction {
    MatrixData<Rational> data;
    std::vector<Rational> r2; // r_1^2 .. r_4^2
    std::vector<double> equation_residuals;
};

inline std::vector<Rational> bryant_weights(const Bryant2TorusParams& P)
{
    Rational a = P.a(), b2 = P.b2(), rho2 = P.rho2;
    return {(b2 - a * a) / (2 * b2) - (b2 - 3 * a * a) * rho2, 1 / (4 * b2) - rho2, 1 / (4 * b2) + (b2 - 3 * a * a) * rho2, rho2};
}

inline std::vector<Rational> bryant_equations(long long m_, long long n_, const std::vector<Rational>& r2)
{
    Rational m(static_cast<long>(m_)), n(static_cast<long>(n_));
    Rational n2 = n * n, m2 = m * m;
    return {r2[0] + r2[1] + r2[2] + r2[3] - 1,
            n2 * n2 * r2[0] - n2 * (n2 - 2 * m2) * (r2[1] + r2[2]) + (n2 * n2 - 8 * m2 * n2 + 8 * m2 * m2) * r2[3],
            n2 * (r2[1] - r2[2]) + 2 * (n2 - 2 * m2) * r2[3]};
}

inline BryantConstruction bryant_2torus(const Bryant2TorusParams& P)
{
    long long m = P.m, n = P.n;
    if (m < 0 || n <= 0 || 2 * m >= n || std::gcd(m, n) != 1)
        throw Error("need coprime m, n with 0 <= m/n < 1/2");
    if (P.rho2 < 0 || P.rho2 > P.rho2_max())
        throw Error("rho outside [0, 1/(2b)]");
    BryantConstruction out;
    out.r2 = bryant_weights(P);
    for (const auto& w : out.r2)
        if (w < 0)
            throw Error("negative r_i^2");
    for (const auto& e : bryant_equations(m, n, out.r2))
        out.equation_residuals.push_back(std::abs(e.get_d()));
    IntMatrix Yall{{0, n, n, 2 * m}, {n, 2 * m, 0, n}};
    Rational nn(static_cast<long>(n * n)), mn = P.a();
    SymMatrix<Rational> Q(2);
    Q.set(0, 0, 1 / nn);
    Q.set(1, 1, 1 / nn);
    Q.set(0, 1, -mn / nn);
    std::vector<int> keep;
    for (int j = 0; j < 4; ++j)
        if (out.r2[j] != 0)
            keep.push_back(j);
    out.data.n = 2;
    out.data.N = static_cast<int>(keep.size());
    out.data.Q = Q;
    out.data.Y = Yall.select_cols(keep);
    for (int j : keep)
        out.data.weights.push_back(out.r2[j]);
    if (!verify_matrix_data(out.data).verified())
        throw ConstructionError("Bryant certificate failed verification");
    return out;
}

} // namespace tori
