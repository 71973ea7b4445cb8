#pragma once

// Independent reference computations used by the unit tests and the acceptance binary.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "tori/tori.hpp"

namespace oracle {

using tori::IntMatrix;
using tori::IntVector;
using tori::Rational;
using tori::SymMatrix;

inline Eigen::MatrixXd dense(const SymMatrix<double>& Q)
{
    Eigen::MatrixXd M(Q.n(), Q.n());
    for (int i = 0; i < Q.n(); ++i)
        for (int j = 0; j < Q.n(); ++j)
            M(i, j) = Q(i, j);
    return M;
}

// Random rational symmetric positive definite matrix, numerators in [-num, num],
// denominators in [1, den]; diagonal dominance is not imposed, rejection keeps PD ones.
inline SymMatrix<Rational> random_pd(std::mt19937_64& rng, int n, int num = 5, int den = 4)
{
    std::uniform_int_distribution<int> N(-num, num), D(1, den), P(1, num);
    for (;;) {
        SymMatrix<Rational> Q(n);
        for (int i = 0; i < n; ++i) {
            Q.set(i, i, tori::make_rational(tori::Integer(P(rng)), tori::Integer(D(rng))));
            for (int j = i + 1; j < n; ++j)
                Q.set(i, j, tori::make_rational(tori::Integer(N(rng)), tori::Integer(D(rng))));
        }
        if (tori::exact_positive_definite(Q))
            return Q;
    }
}

inline Rational quad(const SymMatrix<Rational>& Q, const IntVector& y)
{
    Rational s = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            s += Q(static_cast<int>(i), static_cast<int>(j)) * Rational(static_cast<long>(y[i] * y[j]));
    return s;
}

// Box size used by brute_force_norm: |y_i| <= sqrt(t (Q^{-1})_ii).
inline std::vector<long long> norm_box(const SymMatrix<Rational>& Q, const Rational& t)
{
    Eigen::MatrixXd Qi = dense(tori::to_double(Q)).inverse();
    std::vector<long long> box(Q.n());
    for (int i = 0; i < Q.n(); ++i)
        box[i] = static_cast<long long>(std::floor(std::sqrt(t.get_d() * Qi(i, i)) + 1e-9)) + 1;
    return box;
}

// Canonical representatives (first nonzero coordinate positive) of all y with y^t Q y = t,
// by scanning the box in integer arithmetic on D Q, D the common denominator.
inline std::set<IntVector> brute_force_norm(const SymMatrix<Rational>& Q, const Rational& t)
{
    int n = Q.n();
    tori::Integer D = t.get_den();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            D = tori::lcm_of(D, Q(i, j).get_den());
    std::vector<std::vector<long long>> M(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M[i][j] = Rational(Q(i, j) * Rational(D)).get_num().get_si();
    long long T = Rational(t * Rational(D)).get_num().get_si();
    auto box = norm_box(Q, t);
    std::set<IntVector> out;
    IntVector y(n);
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            long long v = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    v += M[i][j] * y[i] * y[j];
            if (v == T && tori::is_canonical(y))
                out.insert(y);
            return;
        }
        for (long long v = -box[k]; v <= box[k]; ++v) {
            y[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

// Residuals of the homogeneous equations in long double: max over
// |Y_j^t Q Y_j - 1|, |sum c_j^2 Y_j Y_j^t - Q^{-1}/n|, |sum c_j^2 - 1|.
inline long double homogeneous_residual(const SymMatrix<double>& Q, const IntMatrix& Y, const std::vector<double>& w)
{
    int n = Q.n(), N = Y.cols();
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> Qm(n, n), F = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Qm(i, j) = Q(i, j);
    long double r = 0, s = 0;
    for (int k = 0; k < N; ++k) {
        Eigen::Matrix<long double, Eigen::Dynamic, 1> y(n);
        for (int i = 0; i < n; ++i)
            y(i) = static_cast<long double>(Y(i, k));
        r = std::max(r, std::abs(y.dot(Qm * y) - 1));
        F += static_cast<long double>(w[k]) * y * y.transpose();
        s += w[k];
    }
    F -= Qm.inverse() / static_cast<long double>(n);
    return std::max({r, F.cwiseAbs().maxCoeff(), std::abs(s - 1)});
}

// Central-difference Jacobian of x at w (orthonormal coordinates); returns J^t J.
inline Eigen::MatrixXd jacobian_gram(const tori::Immersion& x, const Eigen::VectorXd& w, double h = 1e-5)
{
    int n = static_cast<int>(w.size());
    Eigen::MatrixXd J(x.at_orthonormal(w).size(), n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(i) = h;
        J.col(i) = (x.at_orthonormal(w + e) - x.at_orthonormal(w - e)) / (2 * h);
    }
    return J.transpose() * J;
}

// max logdet(sum lambda_j y_j y_j^t) over the simplex by grid search, n = 2, three points
inline double grid_logdet_n2(const IntMatrix& Y, double step = 1e-3)
{
    double best = -INFINITY;
    int K = static_cast<int>(std::lround(1 / step));
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b) {
            double l[3] = {a * step, b * step, (K - a - b) * step};
            Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
            for (int j = 0; j < 3; ++j) {
                Eigen::Vector2d y(static_cast<double>(Y(0, j)), static_cast<double>(Y(1, j)));
                P += l[j] * y * y.transpose();
            }
            double d = P.determinant();
            if (d > 0)
                best = std::max(best, std::log(d));
        }
    return best;
}

// Random integer matrix with entries in [-b, b] whose first n columns are the unit vectors.
inline IntMatrix random_Y(std::mt19937_64& rng, int n, int N, int b)
{
    std::uniform_int_distribution<int> U(-b, b);
    IntMatrix Y(n, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < n; ++i)
            Y(i, j) = j < n ? (i == j) : U(rng);
    return Y;
}

} // namespace oracle
