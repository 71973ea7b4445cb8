#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "matrix.hpp"

namespace tori {

enum class Definiteness { positive_definite, not_positive_definite, indeterminate };

inline Eigen::MatrixXd to_eigen(const SymMatrix<double>& s)
{
    Eigen::MatrixXd m(s.n(), s.n());
    for (int i = 0; i < s.n(); ++i)
        for (int j = 0; j < s.n(); ++j)
            m(i, j) = s(i, j);
    return m;
}

inline Eigen::MatrixXd to_eigen(const Matrix<double>& s)
{
    Eigen::MatrixXd m(s.rows(), s.cols());
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j)
            m(i, j) = s(i, j);
    return m;
}

inline SymMatrix<double> sym_from_eigen(const Eigen::MatrixXd& m)
{
    SymMatrix<double> s(static_cast<int>(m.rows()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.rows(); ++j)
            s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    return s;
}

// Pivoted Cholesky with tolerance relative to the largest diagonal entry.
inline Definiteness definiteness(const SymMatrix<double>& S, double rel_tol = 1e-12)
{
    int n = S.n();
    Eigen::MatrixXd A = to_eigen(S);
    double scale = 0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(A(i, i)));
    if (scale == 0)
        scale = A.cwiseAbs().maxCoeff();
    if (scale == 0)
        return n == 0 ? Definiteness::positive_definite : Definiteness::indeterminate;
    double tol = rel_tol * scale;
    std::vector<int> rest(n);
    for (int i = 0; i < n; ++i)
        rest[i] = i;
    while (!rest.empty()) {
        int best = 0;
        for (std::size_t k = 1; k < rest.size(); ++k)
            if (A(rest[k], rest[k]) > A(rest[best], rest[best]))
                best = static_cast<int>(k);
        int p = rest[best];
        double d = A(p, p);
        if (d <= tol) {
            double worst = 0;
            for (int i : rest)
                for (int j : rest)
                    worst = std::max(worst, std::abs(A(i, j)));
            if (d < -tol || worst > tol)
                return Definiteness::not_positive_definite;
            return Definiteness::indeterminate;
        }
        rest.erase(rest.begin() + best);
        for (int i : rest)
            for (int j : rest)
                A(i, j) -= A(i, p) * A(p, j) / d;
    }
    return Definiteness::positive_definite;
}

// All leading principal minors positive, read off the elimination pivots.
template <class T>
bool exact_positive_definite(const SymMatrix<T>& S)
{
    int n = S.n();
    Matrix<T> A = S.matrix();
    for (int c = 0; c < n; ++c) {
        if (scalar_traits<T>::sign(A(c, c)) <= 0)
            return false;
        T inv = T(1) / A(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (scalar_traits<T>::is_zero(A(i, c)))
                continue;
            T f = A(i, c) * inv;
            for (int j = c; j < n; ++j)
                A(i, j) -= f * A(c, j);
        }
    }
    return true;
}

template <class T>
Definiteness definiteness(const SymMatrix<T>& S)
{
    return exact_positive_definite(S) ? Definiteness::positive_definite : Definiteness::not_positive_definite;
}

template <class T>
bool is_positive_definite(const SymMatrix<T>& S)
{
    return definiteness(S) == Definiteness::positive_definite;
}

inline double logdet(const SymMatrix<double>& S)
{
    Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(S));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefiniteError("logdet of a matrix that is not positive definite");
    const auto& L = llt.matrixL();
    double acc = 0;
    for (int i = 0; i < S.n(); ++i) {
        double d = L(i, i);
        if (!(d > 0))
            throw NotPositiveDefiniteError("logdet of a matrix that is not positive definite");
        acc += 2 * std::log(d);
    }
    return acc;
}

template <class T>
double logdet(const SymMatrix<T>& S)
{
    if (!exact_positive_definite(S))
        throw NotPositiveDefiniteError("logdet of a matrix that is not positive definite");
    return logdet(to_double(S));
}

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& S, double tol = 1e-10)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
    Eigen::VectorXd ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol * scale)
            throw NotPositiveDefiniteError("psd_sqrt of a matrix with a negative eigenvalue");
        ev(i) = std::sqrt(std::max(0.0, ev(i)));
    }
    Eigen::MatrixXd R = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (R + R.transpose());
}

inline SymMatrix<double> psd_sqrt(const SymMatrix<double>& S, double tol = 1e-10)
{
    return sym_from_eigen(psd_sqrt(to_eigen(S), tol));
}

inline double min_eigenvalue(const Eigen::MatrixXd& S)
{
    if (S.rows() == 0)
        return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace tori
