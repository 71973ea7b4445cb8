#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "algebraic.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "simplex.hpp"

namespace tori {

inline SymMatrix<Rational> rank_one(const IntMatrix& Y, int j)
{
    return outer(column_of<Rational>(Y, j));
}

// ---------------------------------------------------------------- slice W_Y

struct AffineSliceW {
    IntMatrix Y;
    SymMatrix<Rational> Q0;
    std::vector<SymMatrix<Rational>> basis;
    int n() const { return Y.rows(); }
    int s() const { return static_cast<int>(basis.size()); }
};

namespace detail {

inline SymMatrix<Rational> content_one(const SymMatrix<Rational>& S)
{
    Integer l = 1, g = 0;
    for (int i = 0; i < S.n(); ++i)
        for (int j = i; j < S.n(); ++j)
            l = lcm_of(l, S(i, j).get_den());
    SymMatrix<Rational> T = Rational(l) * S;
    for (int i = 0; i < S.n(); ++i)
        for (int j = i; j < S.n(); ++j)
            g = gcd_of(g, T(i, j).get_num());
    if (g == 0)
        return T;
    int first = 0;
    for (int i = 0; i < S.n() && first == 0; ++i)
        for (int j = i; j < S.n(); ++j)
            if (T(i, j) != 0) {
                first = sgn(T(i, j));
                break;
            }
    return make_rational(Integer(first), g) * T;
}

} // namespace detail

inline AffineSliceW build_slice(const IntMatrix& Y)
{
    int n = Y.rows(), N = Y.cols();
    if (rank(Y) < n)
        throw DimensionError("Y must have rank n");
    std::vector<SymMatrix<Rational>> B;
    for (int j = 0; j < N; ++j)
        B.push_back(rank_one(Y, j));
    int dim = sym_dim(n);
    Matrix<Rational> V(dim, N);
    for (int j = 0; j < N; ++j) {
        auto v = sym_vector(B[j]);
        for (int k = 0; k < dim; ++k)
            V(k, j) = v[k];
    }
    auto piv = rref(V).pivots;
    int m = static_cast<int>(piv.size());
    // Q0 = sum_k x_k B_{piv k}, <Q0, B_j> = 1 on the pivots
    Matrix<Rational> G(m, m), rhs(m, 1, Rational(1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            G(a, b) = trace_inner(B[piv[a]], B[piv[b]]);
    Matrix<Rational> x = solve(G, rhs);
    SymMatrix<Rational> Q0(n);
    for (int a = 0; a < m; ++a)
        Q0 = Q0 + x(a, 0) * B[piv[a]];
    for (int j = 0; j < N; ++j)
        if (trace_inner(Q0, B[j]) != 1)
            throw InfeasibleError("no quadric through all points of Y");

    // orthogonal basis of span B, then complement seeded by E_ii, E_ij + E_ji
    std::vector<SymMatrix<Rational>> ortho;
    auto project_out = [&](SymMatrix<Rational> S) {
        for (const auto& o : ortho)
            S = S - (trace_inner(S, o) / trace_inner(o, o)) * o;
        return S;
    };
    for (int a = 0; a < m; ++a)
        ortho.push_back(project_out(B[piv[a]]));
    std::vector<SymMatrix<Rational>> basis;
    for (auto [i, j] : sym_index(n)) {
        SymMatrix<Rational> E(n);
        E.set(i, j, Rational(1));
        SymMatrix<Rational> R = project_out(E);
        if (trace_inner(R, R) == 0)
            continue;
        R = detail::content_one(R);
        ortho.push_back(R);
        basis.push_back(R);
    }
    return {Y, Q0, basis};
}

// ---------------------------------------------------------------- damped Newton core

namespace detail {

inline double tr_inner(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    return A.cwiseProduct(B).sum();
}

// f(z) = c.z + logdet(A0 + sum_a z_a D_a)
struct AffineLogdet {
    Eigen::MatrixXd A0;
    std::vector<Eigen::MatrixXd> D;
    Eigen::VectorXd c;

    Eigen::MatrixXd at(const Eigen::VectorXd& z) const
    {
        Eigen::MatrixXd M = A0;
        for (std::size_t a = 0; a < D.size(); ++a)
            M += z(a) * D[a];
        return M;
    }

    std::optional<double> value(const Eigen::VectorXd& z) const
    {
        Eigen::LLT<Eigen::MatrixXd> llt(at(z));
        if (llt.info() != Eigen::Success)
            return std::nullopt;
        double ld = 0;
        for (int i = 0; i < A0.rows(); ++i) {
            double d = llt.matrixLLT()(i, i);
            if (!(d > 0))
                return std::nullopt;
            ld += 2 * std::log(d);
        }
        return c.dot(z) + ld;
    }
};

struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0;
};

inline NewtonOutcome newton_maximize(const AffineLogdet& F, Eigen::VectorXd& z, double gtol, double dtol, int max_iter,
                                     const std::function<bool(const Eigen::VectorXd&)>& stop = {})
{
    int k = static_cast<int>(F.D.size());
    NewtonOutcome out;
    if (k == 0) {
        out.converged = true;
        return out;
    }
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        Eigen::MatrixXd M = F.at(z);
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        Eigen::MatrixXd Minv = llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
        std::vector<Eigen::MatrixXd> G(k);
        Eigen::VectorXd g(k);
        for (int a = 0; a < k; ++a) {
            G[a] = Minv * F.D[a];
            g(a) = F.c(a) + G[a].trace();
        }
        Eigen::MatrixXd H(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b)
                H(a, b) = H(b, a) = tr_inner(G[a], G[b].transpose());
        out.grad_norm = g.norm();
        if (stop && stop(z)) {
            out.converged = true;
            return out;
        }
        if (out.grad_norm <= gtol) {
            out.converged = true;
            return out;
        }
        Eigen::VectorXd d = H.ldlt().solve(g); // ascent: H here is minus the Hessian
        double dec2 = g.dot(d);
        if (!(dec2 > 0) || !std::isfinite(dec2))
            d = g, dec2 = g.squaredNorm();
        if (dec2 <= dtol) {
            out.converged = true;
            return out;
        }
        Eigen::MatrixXd dM = Eigen::MatrixXd::Zero(M.rows(), M.cols());
        for (int a = 0; a < k; ++a)
            dM += d(a) * F.D[a];
        Eigen::MatrixXd L = llt.matrixL();
        Eigen::MatrixXd S = L.triangularView<Eigen::Lower>().solve(dM);
        S = L.triangularView<Eigen::Lower>().solve(S.transpose()).transpose();
        double lmin = min_eigenvalue(S);
        double alpha = 1.0;
        if (lmin < 0)
            alpha = std::min(1.0, 0.95 / (-lmin));
        double f0 = *F.value(z);
        double slope = g.dot(d);
        bool moved = false;
        // full Newton step inside the Dikin ellipsoid
        if (dec2 < 0.1 && alpha == 1.0 && F.value(z + d)) {
            z += d;
            moved = true;
        }
        for (int h = 0; h < 60 && !moved; ++h) {
            Eigen::VectorXd zn = z + alpha * d;
            auto fv = F.value(zn);
            if (fv && *fv >= f0 + 1e-4 * alpha * slope) {
                z = zn;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            // numerical floor reached
            out.converged = dec2 < 1e-20;
            out.iterations = it + 1;
            return out;
        }
    }
    out.iterations = max_iter;
    return out;
}

inline std::vector<Eigen::MatrixXd> orthonormal_directions(const std::vector<SymMatrix<Rational>>& basis)
{
    std::vector<Eigen::MatrixXd> U;
    for (const auto& b : basis) {
        Eigen::MatrixXd v = to_eigen(to_double(b));
        for (const auto& u : U)
            v -= tr_inner(v, u) * u;
        for (const auto& u : U)
            v -= tr_inner(v, u) * u;
        v /= std::sqrt(tr_inner(v, v));
        U.push_back(v);
    }
    return U;
}

} // namespace detail

// ---------------------------------------------------------------- maximize over W_Y

struct WResult {
    bool feasible = false;
    SymMatrix<double> Q;
    std::vector<double> t; // coordinates along the orthonormalized basis directions
    double stationarity = 0;
    int iterations = 0;
};

inline WResult maximize_logdet_W(const AffineSliceW& slice, double tol = 1e-10, int max_iter = 200,
                                 const std::optional<SymMatrix<double>>& start = std::nullopt)
{
    int n = slice.n(), s = slice.s();
    WResult res;
    if (s == 0) {
        res.feasible = exact_positive_definite(slice.Q0);
        res.Q = to_double(slice.Q0);
        return res;
    }
    auto U = detail::orthonormal_directions(slice.basis);
    Eigen::MatrixXd A0 = to_eigen(to_double(slice.Q0));
    Eigen::VectorXd t = Eigen::VectorXd::Zero(s);
    if (start) {
        Eigen::MatrixXd S0 = to_eigen(*start);
        for (int i = 0; i < s; ++i)
            t(i) = detail::tr_inner(S0 - A0, U[i]);
        Eigen::MatrixXd Qs = A0;
        for (int i = 0; i < s; ++i)
            Qs += t(i) * U[i];
        if ((Qs - S0).norm() > 1e-8 * std::max(1.0, S0.norm()))
            throw Error("start point does not lie on the slice");
        if (definiteness(sym_from_eigen(Qs)) != Definiteness::positive_definite)
            throw NotPositiveDefiniteError("start point is not positive definite");
    }
    auto q_at = [&](const Eigen::VectorXd& tt) {
        Eigen::MatrixXd M = A0;
        for (int i = 0; i < s; ++i)
            M += tt(i) * U[i];
        return M;
    };

    if (min_eigenvalue(q_at(t)) <= 0 || definiteness(sym_from_eigen(q_at(t))) != Definiteness::positive_definite) {
        // barrier phase one: maximize w*sigma + logdet(Q(t) - sigma I)
        double scale = std::max(1.0, A0.cwiseAbs().maxCoeff());
        detail::AffineLogdet F;
        F.A0 = A0;
        F.D = U;
        F.D.push_back(-Eigen::MatrixXd::Identity(n, n));
        F.c = Eigen::VectorXd::Zero(s + 1);
        Eigen::VectorXd z(s + 1);
        z.head(s) = t;
        z(s) = min_eigenvalue(q_at(t)) - scale;
        bool found = false;
        auto feasible_now = [&](const Eigen::VectorXd& zz) {
            return zz(s) > 1e-12 * scale && definiteness(sym_from_eigen(q_at(zz.head(s)))) == Definiteness::positive_definite;
        };
        double w = 1.0 / scale;
        for (int round = 0; round < 40 && !found; ++round) {
            F.c(s) = w;
            auto o = detail::newton_maximize(F, z, 0.0, 1e-14, max_iter, feasible_now);
            res.iterations += o.iterations;
            if (feasible_now(z)) {
                found = true;
                break;
            }
            if (!o.converged)
                throw ConvergenceError("feasibility phase did not converge");
            // central path: sup lambda_min <= sigma + n / w
            if (z(s) + n / w <= 1e-8 * scale)
                return res;
            w *= 10;
        }
        if (!found)
            return res;
        t = z.head(s);
    }

    detail::AffineLogdet F;
    F.A0 = A0;
    F.D = U;
    F.c = Eigen::VectorXd::Zero(s);
    auto o = detail::newton_maximize(F, t, tol, 0.0, max_iter);
    res.iterations += o.iterations;
    if (!o.converged)
        throw ConvergenceError("Newton iteration on the slice did not converge");
    Eigen::MatrixXd Q = q_at(t);
    Eigen::MatrixXd Qinv = Q.llt().solve(Eigen::MatrixXd::Identity(n, n));
    double st = 0;
    for (int i = 0; i < s; ++i)
        st += std::pow(detail::tr_inner(Qinv, U[i]), 2);
    res.feasible = true;
    res.Q = sym_from_eigen(Q);
    res.t.assign(t.data(), t.data() + s);
    res.stationarity = std::sqrt(st);
    return res;
}

// ---------------------------------------------------------------- maximize over C_Y

template <class T>
struct HullPoint {
    IntMatrix Y;
    std::vector<T> lambda;
    SymMatrix<T> P;
};

template <class T>
SymMatrix<T> hull_matrix(const IntMatrix& Y, const std::vector<T>& lambda)
{
    int n = Y.rows();
    SymMatrix<T> P(n);
    for (int j = 0; j < Y.cols(); ++j) {
        if (scalar_traits<T>::is_zero(lambda[j]))
            continue;
        auto y = column_of<T>(Y, j);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                P.set(a, b, P(a, b) + lambda[j] * y[a] * y[b]);
    }
    return P;
}

struct HullOptimum {
    HullPoint<double> point;
    double kkt_gap = 0;
    int rounds = 0;
};

namespace detail {

struct HullState {
    std::vector<Eigen::VectorXd> y;
    int n;

    Eigen::MatrixXd P(const std::vector<double>& lam) const
    {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 0; j < y.size(); ++j)
            if (lam[j] != 0)
                M += lam[j] * y[j] * y[j].transpose();
        return M;
    }

    std::vector<double> scores(const Eigen::MatrixXd& Pinv) const
    {
        std::vector<double> d(y.size());
        for (std::size_t j = 0; j < y.size(); ++j)
            d[j] = y[j].dot(Pinv * y[j]);
        return d;
    }
};

inline std::optional<Eigen::MatrixXd> pd_inverse(const Eigen::MatrixXd& P)
{
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success)
        return std::nullopt;
    for (int i = 0; i < P.rows(); ++i)
        if (!(llt.matrixLLT()(i, i) > 0))
            return std::nullopt;
    return llt.solve(Eigen::MatrixXd::Identity(P.rows(), P.cols()));
}

inline double logdet_or_ninf(const Eigen::MatrixXd& P)
{
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success)
        return -std::numeric_limits<double>::infinity();
    double ld = 0;
    for (int i = 0; i < P.rows(); ++i) {
        double d = llt.matrixLLT()(i, i);
        if (!(d > 0))
            return -std::numeric_limits<double>::infinity();
        ld += 2 * std::log(d);
    }
    return ld;
}

// Equality-constrained Newton on the current support; indices hitting zero are dropped.
inline void polish_support(const HullState& st, std::vector<double>& lam, int max_steps = 100)
{
    int n = st.n;
    for (int step = 0; step < max_steps; ++step) {
        std::vector<int> S;
        for (std::size_t j = 0; j < lam.size(); ++j)
            if (lam[j] > 0)
                S.push_back(static_cast<int>(j));
        int m = static_cast<int>(S.size());
        Eigen::MatrixXd P = st.P(lam);
        auto Pinv = pd_inverse(P);
        if (!Pinv)
            return;
        Eigen::VectorXd g(m);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 1, m + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        double dev = 0;
        for (int a = 0; a < m; ++a) {
            Eigen::VectorXd w = *Pinv * st.y[S[a]];
            g(a) = st.y[S[a]].dot(w);
            dev = std::max(dev, std::abs(g(a) - n));
            for (int b = 0; b < m; ++b) {
                double v = st.y[S[b]].dot(w);
                K(a, b) = -v * v;
            }
            K(a, m) = K(m, a) = 1;
            rhs(a) = -g(a);
        }
        if (dev <= 1e-14 * n)
            return;
        Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);
        Eigen::VectorXd d = sol.head(m);
        double alpha = 1.0;
        int blocked = -1;
        for (int a = 0; a < m; ++a)
            if (d(a) < 0 && lam[S[a]] + alpha * d(a) <= 0) {
                alpha = -lam[S[a]] / d(a);
                blocked = a;
            }
        double f0 = logdet_or_ninf(P);
        std::vector<double> trial;
        bool ok = false;
        for (int h = 0; h < 50; ++h) {
            trial = lam;
            for (int a = 0; a < m; ++a)
                trial[S[a]] = std::max(0.0, lam[S[a]] + alpha * d(a));
            if (blocked >= 0 && h == 0)
                trial[S[blocked]] = 0;
            double f1 = logdet_or_ninf(st.P(trial));
            if (f1 >= f0 - 1e-15 * std::abs(f0)) {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!ok)
            return;
        double total = 0;
        for (double v : trial)
            total += v;
        for (auto& v : trial)
            v /= total;
        if (trial == lam)
            return;
        lam = trial;
    }
}

} // namespace detail

inline HullOptimum maximize_logdet_C(const IntMatrix& Y, double tol = 1e-10, int max_iter = 200)
{
    int n = Y.rows(), N = Y.cols();
    if (N == 0 || rank(Y) < n)
        throw InfeasibleError("convex hull contains no positive definite point");
    detail::HullState st;
    st.n = n;
    for (int j = 0; j < N; ++j) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i)
            v(i) = static_cast<double>(Y(i, j));
        st.y.push_back(v);
    }
    std::vector<double> lam(N, 1.0 / N);
    HullOptimum out;
    double gap = std::numeric_limits<double>::infinity();
    for (int round = 0; round < max_iter; ++round) {
        out.rounds = round + 1;
        for (int k = 0; k < 2000; ++k) {
            auto Pinv = detail::pd_inverse(st.P(lam));
            if (!Pinv)
                throw ConvergenceError("hull iterate lost definiteness");
            auto d = st.scores(*Pinv);
            int jp = 0, jm = -1;
            for (int j = 0; j < N; ++j) {
                if (d[j] > d[jp])
                    jp = j;
                if (lam[j] > 0 && (jm < 0 || d[j] < d[jm]))
                    jm = j;
            }
            double up = d[jp] - n, down = n - d[jm];
            if (std::max(up, down) <= 1e-7)
                break;
            int j;
            double alpha;
            if (up >= down) {
                j = jp;
                alpha = (d[j] - n) / (n * (d[j] - 1));
            } else {
                j = jm;
                double floor_a = lam[j] >= 1 ? -std::numeric_limits<double>::infinity() : -lam[j] / (1 - lam[j]);
                alpha = d[j] > 1 ? (d[j] - n) / (n * (d[j] - 1)) : floor_a;
                alpha = std::max(alpha, floor_a);
                if (lam[j] >= 1)
                    break;
            }
            for (int i = 0; i < N; ++i)
                lam[i] *= (1 - alpha);
            lam[j] += alpha;
            if (lam[j] < 1e-300)
                lam[j] = 0;
        }
        detail::polish_support(st, lam);
        auto Pinv = detail::pd_inverse(st.P(lam));
        if (!Pinv)
            throw ConvergenceError("hull iterate lost definiteness");
        auto d = st.scores(*Pinv);
        gap = *std::max_element(d.begin(), d.end()) - n;
        if (gap <= tol)
            break;
    }
    if (gap > tol)
        throw ConvergenceError("hull maximization did not reach the KKT tolerance");
    out.kkt_gap = std::max(0.0, gap);
    out.point.Y = Y;
    out.point.lambda = lam;
    out.point.P = sym_from_eigen(st.P(lam));
    return out;
}

// Exact membership of target in the cone/hull spanned by Y_j Y_j^t; weights or nullopt.
template <class T>
std::optional<std::vector<T>> hull_weights(const IntMatrix& Y, const SymMatrix<T>& target)
{
    int n = Y.rows(), N = Y.cols(), dim = sym_dim(n);
    Matrix<T> A(dim, N);
    for (int j = 0; j < N; ++j) {
        auto v = sym_vector(outer(column_of<T>(Y, j)));
        for (int k = 0; k < dim; ++k)
            A(k, j) = v[k];
    }
    return lp_feasible(A, sym_vector(target));
}

// ---------------------------------------------------------------- pencil

struct PencilResult {
    AlgebraicNumber t0;
    SymMatrix<AlgebraicNumber> Qstar;
    int degree = 1;
    Rational discriminant_quantity;
    Rational shift; // Q0 was replaced by Q0 + shift*Q1 when singular
};

inline PencilResult pencil_maximize(const SymMatrix<Rational>& Q0_in, const SymMatrix<Rational>& Q1)
{
    if (Q0_in.n() != 3 || Q1.n() != 3)
        throw DimensionError("pencil_maximize works on 3x3 matrices");
    Rational tau = 0;
    SymMatrix<Rational> Q0 = Q0_in;
    for (int k = 1; determinant(Q0) == 0; ++k) {
        if (k > 64)
            throw SingularMatrixError("pencil is identically singular");
        tau = Rational(k % 2 ? (k + 1) / 2 : -(k / 2));
        Q0 = Q0_in + tau * Q1;
    }
    Matrix<Rational> M = inverse(Q0.matrix()) * Q1.matrix();
    Matrix<Rational> M2 = M * M;
    Rational tr = M(0, 0) + M(1, 1) + M(2, 2);
    Rational tr2 = M2(0, 0) + M2(1, 1) + M2(2, 2);
    Rational a1 = tr, a2 = (tr * tr - tr2) / 2, a3 = determinant(M);
    Rational D = 4 * a2 * a2 - 12 * a1 * a3;

    PencilResult res;
    res.shift = tau;
    res.discriminant_quantity = D;
    std::vector<AlgebraicNumber> cands;
    if (a3 == 0) {
        if (a2 == 0)
            throw InfeasibleError("determinant along the pencil has no interior maximum");
        cands.push_back(AlgebraicNumber(Rational(-a1 / (2 * a2))));
        res.degree = 1;
    } else {
        if (D < 0)
            throw InfeasibleError("determinant along the pencil has no critical point");
        if (is_rational_square(D)) {
            Rational r = make_rational(isqrt(D.get_num()), isqrt(D.get_den()));
            cands.push_back(AlgebraicNumber(Rational((-2 * a2 + r) / (6 * a3))));
            cands.push_back(AlgebraicNumber(Rational((-2 * a2 - r) / (6 * a3))));
            res.degree = 1;
        } else {
            Integer num = D.get_num() * D.get_den();
            auto [k, d] = squarefree_split(num);
            FieldPtr f = NumberField::sqrt_field(d);
            Rational c = Rational(k) / Rational(D.get_den()); // sqrt(D) = c*sqrt(d)
            for (int sg : {1, -1})
                cands.push_back(sqrt_element(f, Rational(-2 * a2 / (6 * a3)), Rational(sg * c / (6 * a3))));
            res.degree = 2;
        }
    }
    SymMatrix<AlgebraicNumber> A0 = Q0.cast<AlgebraicNumber>(), A1 = Q1.cast<AlgebraicNumber>();
    for (const auto& t : cands) {
        SymMatrix<AlgebraicNumber> Q = A0 + t * A1;
        if (exact_positive_definite(Q)) {
            res.t0 = t + AlgebraicNumber(tau);
            res.Qstar = Q;
            return res;
        }
    }
    throw InfeasibleError("no positive definite critical point on the pencil");
}

inline PencilResult pencil_maximize(const AffineSliceW& slice)
{
    if (slice.s() != 1)
        throw DimensionError("pencil_maximize needs a one-dimensional slice");
    return pencil_maximize(slice.Q0, slice.basis[0]);
}

// ---------------------------------------------------------------- rank-4 Lagrange system

struct Rank4Candidate {
    AlgebraicNumber a, b, c;
    SymMatrix<AlgebraicNumber> Q;
    IntPoly minpoly; // of a
    int degree = 1;
    double stationarity = 0;
    bool positive_definite = false;
};

struct Rank4Critical {
    std::vector<Rational> r;
    RatPoly quartic;             // in a, low to high
    std::vector<double> a_roots; // real roots, ascending
    std::vector<Rank4Candidate> candidates;
    bool block_diagonal = false;

    const Rank4Candidate& best() const
    {
        const Rank4Candidate* pick = nullptr;
        double best_det = -1;
        for (const auto& c : candidates) {
            if (!c.positive_definite)
                continue;
            double d = determinant(c.Q).to_double();
            if (d > best_det) {
                best_det = d;
                pick = &c;
            }
        }
        if (!pick)
            throw InfeasibleError("no positive definite critical point");
        return *pick;
    }
};

inline RatPoly rank4_quartic(const Rational& r1, const Rational& r2, const Rational& r3)
{
    Rational p1 = r1 * r1, p2 = r2 * r2, p3 = r3 * r3;
    Rational s3 = p3 - 1;
    Rational c4 = 12 * p1 * r1 * p2 * r2;
    Rational c3 = 8 * p1 * p2 * (2 * p1 + 2 * p2 - p3 - 1);
    Rational c2 = r1 * r2 * (7 * p1 * p1 + 2 * p1 * (5 * p2 - 4 * (p3 + 1)) + 7 * p2 * p2 - 8 * p2 * (p3 + 1) + s3 * s3);
    Rational c1 = (p1 + p2) * (p1 * p1 - 2 * p1 * (p2 + p3 + 1) + p2 * p2 - 2 * p2 * (p3 + 1) + s3 * s3);
    Rational c0 = -r1 * r2 * (p1 * p1 + 2 * p1 * p2 + p2 * p2 - s3 * s3);
    RatPoly q{c0, c1, c2, c3, c4};
    trim(q);
    return q;
}

namespace detail {

inline SymMatrix<AlgebraicNumber> unit_diag(const AlgebraicNumber& a, const AlgebraicNumber& b, const AlgebraicNumber& c)
{
    SymMatrix<AlgebraicNumber> Q(3);
    for (int i = 0; i < 3; ++i)
        Q.set(i, i, AlgebraicNumber(1));
    Q.set(0, 1, a);
    Q.set(0, 2, b);
    Q.set(1, 2, c);
    return Q;
}

// distance of offdiag(Q^{-1}) from the constraint normal direction
inline double lagrange_residual(const SymMatrix<AlgebraicNumber>& Q, const std::vector<Rational>& r)
{
    using ld = long double;
    ld q[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            q[i][j] = Q(i, j).to_long_double();
    ld det = q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
             q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    if (det == 0)
        return std::numeric_limits<double>::infinity();
    ld v[3] = {-(q[1][0] * q[2][2] - q[1][2] * q[2][0]) / det, (q[1][0] * q[2][1] - q[1][1] * q[2][0]) / det,
               -(q[0][0] * q[2][1] - q[0][1] * q[2][0]) / det};
    ld w[3] = {static_cast<ld>(to_double(r[0] * r[1])), static_cast<ld>(to_double(r[0] * r[2])),
               static_cast<ld>(to_double(r[1] * r[2]))};
    ld ww = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    ld vw = v[0] * w[0] + v[1] * w[1] + v[2] * w[2];
    ld acc = 0;
    for (int i = 0; i < 3; ++i) {
        ld e = v[i] - (ww > 0 ? vw / ww * w[i] : 0);
        acc += e * e;
    }
    return static_cast<double>(std::sqrt(2 * acc));
}

} // namespace detail

inline Rank4Critical rank4_lagrange(const std::vector<Rational>& r)
{
    if (r.size() != 3)
        throw DimensionError("rank4_lagrange takes a triple");
    const Rational &r1 = r[0], &r2 = r[1], &r3 = r[2];
    if (r1 * r3 == 0)
        throw Error("rank4_lagrange needs r1*r3 != 0");
    Rank4Critical out;
    out.r = r;
    if (r2 == 0) {
        out.block_diagonal = true;
        Rational b = (1 - r1 * r1 - r3 * r3) / (2 * r1 * r3);
        Rank4Candidate c;
        c.a = AlgebraicNumber(0);
        c.b = AlgebraicNumber(b);
        c.c = AlgebraicNumber(0);
        c.Q = detail::unit_diag(c.a, c.b, c.c);
        c.minpoly = IntPoly{Integer(0), Integer(1)};
        c.degree = 1;
        c.positive_definite = exact_positive_definite(c.Q);
        c.stationarity = detail::lagrange_residual(c.Q, r);
        out.a_roots = {0.0};
        out.candidates.push_back(c);
        return out;
    }
    out.quartic = rank4_quartic(r1, r2, r3);
    if (degree(out.quartic) < 1)
        throw Error("degenerate Lagrange quartic");
    IntPoly qi = primitive_part(out.quartic);
    auto factors = factor_degree_le4(qi);
    std::sort(factors.begin(), factors.end());
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
    struct Root {
        double approx;
        IntPoly f;
        IsolatingInterval iv;
    };
    std::vector<Root> roots;
    for (const auto& f : factors) {
        if (degree(f) < 1)
            continue;
        for (const auto& iv : isolate_real_roots(to_ratpoly(f))) {
            auto fine = refine_root(to_ratpoly(f), iv, Rational(1, 1000000000));
            roots.push_back({to_double((fine.lo + fine.hi) / 2), f, iv});
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.approx < y.approx; });
    for (const auto& rt : roots) {
        out.a_roots.push_back(rt.approx);
        AlgebraicNumber a = root_in_interval(rt.f, rt.iv);
        AlgebraicNumber A1(r1), A2(r2), A3(r3);
        AlgebraicNumber K = AlgebraicNumber(2) * a * A1 * A2 + A1 * A1 + A2 * A2 + A3 * A3 - AlgebraicNumber(1);
        AlgebraicNumber D = AlgebraicNumber(2) * A3 * (AlgebraicNumber(2) * a * A1 * A2 + A1 * A1 + A2 * A2);
        if (D.is_zero())
            continue;
        Rank4Candidate c;
        c.a = a;
        c.b = -(a * A2 + A1) * K / D;
        c.c = -(a * A1 + A2) * K / D;
        c.Q = detail::unit_diag(c.a, c.b, c.c);
        c.minpoly = primitive_part(rt.f);
        c.degree = degree(rt.f);
        c.positive_definite = exact_positive_definite(c.Q);
        c.stationarity = detail::lagrange_residual(c.Q, r);
        out.candidates.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------- Caratheodory

// Conic elimination down to n(n+1)/2 points; same P exactly for exact T.
template <class T>
HullPoint<T> caratheodory_reduce(const HullPoint<T>& pt, std::vector<int>* kept = nullptr)
{
    using tr = scalar_traits<T>;
    int n = pt.Y.rows(), dim = sym_dim(n);
    std::vector<int> S;
    std::vector<T> lam;
    for (int j = 0; j < pt.Y.cols(); ++j)
        if (tr::sign(pt.lambda[j]) > 0) {
            S.push_back(j);
            lam.push_back(pt.lambda[j]);
        }
    if (static_cast<int>(S.size()) == pt.Y.cols() && static_cast<int>(S.size()) <= dim) {
        if (kept)
            *kept = S;
        return pt;
    }
    while (static_cast<int>(S.size()) > dim) {
        int m = static_cast<int>(S.size());
        Matrix<T> A(dim, m);
        for (int a = 0; a < m; ++a) {
            auto v = sym_vector(outer(column_of<T>(pt.Y, S[a])));
            for (int k = 0; k < dim; ++k)
                A(k, a) = v[k];
        }
        std::vector<T> mu;
        if constexpr (is_exact_v<T>) {
            mu = nullspace(A).front();
        } else {
            Eigen::MatrixXd E = to_eigen(A);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullV);
            Eigen::VectorXd v = svd.matrixV().col(m - 1);
            mu.assign(v.data(), v.data() + m);
        }
        bool pos = std::any_of(mu.begin(), mu.end(), [](const T& v) { return tr::sign(v) > 0; });
        if (!pos)
            for (auto& v : mu)
                v = -v;
        int arg = -1;
        T theta = T(0);
        for (int a = 0; a < m; ++a) {
            if (tr::sign(mu[a]) <= 0)
                continue;
            T q = lam[a] / mu[a];
            if (arg < 0 || q < theta) {
                arg = a;
                theta = q;
            }
        }
        std::vector<int> S2;
        std::vector<T> lam2;
        for (int a = 0; a < m; ++a) {
            if (a == arg)
                continue;
            T v = lam[a] - theta * mu[a];
            if constexpr (is_exact_v<T>) {
                if (tr::is_zero(v))
                    continue;
            } else {
                v = std::max(v, 0.0);
            }
            S2.push_back(S[a]);
            lam2.push_back(v);
        }
        S = std::move(S2);
        lam = std::move(lam2);
    }
    HullPoint<T> out;
    out.Y = pt.Y.select_cols(S);
    out.lambda = lam;
    out.P = hull_matrix(out.Y, lam);
    if (kept)
        *kept = S;
    return out;
}

} // namespace tori
