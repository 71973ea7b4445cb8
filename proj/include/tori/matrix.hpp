#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <type_traits>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace tori {

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static double to_double(const Rational& v) { return v.get_d(); }
    static int sign(const Rational& v, double = 0) { return sgn(v); }
    static bool is_zero(const Rational& v, double = 0) { return v == 0; }
};

template <>
struct scalar_traits<AlgebraicNumber> {
    static constexpr bool exact = true;
    static AlgebraicNumber zero() { return AlgebraicNumber(0); }
    static AlgebraicNumber one() { return AlgebraicNumber(1); }
    static double to_double(const AlgebraicNumber& v) { return v.to_double(); }
    static int sign(const AlgebraicNumber& v, double = 0) { return v.sign(); }
    static bool is_zero(const AlgebraicNumber& v, double = 0) { return v.is_zero(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double to_double(double v) { return v; }
    static int sign(double v, double tol = 0) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
    static bool is_zero(double v, double tol = 0) { return std::abs(v) <= tol; }
};

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

// Dense row-major matrix; also used as plain storage for integer matrices.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& fill = T(0)) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
    {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw DimensionError("ragged matrix literal");
            for (const auto& v : r)
                a_.push_back(v);
        }
    }

    static Matrix identity(int n)
    {
        Matrix m(n, n, T(0));
        for (int i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<T> col(int j) const
    {
        std::vector<T> v(rows_);
        for (int i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix select_cols(const std::vector<int>& idx) const
    {
        Matrix m(rows_, static_cast<int>(idx.size()));
        for (int i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < idx.size(); ++k)
                m(i, static_cast<int>(k)) = (*this)(i, idx[k]);
        return m;
    }

    template <class U>
    Matrix<U> cast() const
    {
        Matrix<U> m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if constexpr (std::is_same_v<T, long long>)
                    m(i, j) = U(static_cast<long>((*this)(i, j)));
                else
                    m(i, j) = U((*this)(i, j));
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); ++k)
            r.a_[k] = a.a_[k] + b.a_[k];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); ++k)
            r.a_[k] = a.a_[k] - b.a_[k];
        return r;
    }

    friend Matrix operator*(const T& s, const Matrix& a)
    {
        Matrix r = a;
        for (auto& v : r.a_)
            v = s * v;
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw DimensionError("matrix product dimension mismatch");
        Matrix r(a.rows_, b.cols_, T(0));
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const T& v = a(i, k);
                if (scalar_traits_is_zero(v))
                    continue;
                for (int j = 0; j < b.cols_; ++j)
                    r(i, j) += v * b(k, j);
            }
        return r;
    }

private:
    static bool scalar_traits_is_zero(const T& v)
    {
        if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, AlgebraicNumber> || std::is_same_v<T, double>)
            return scalar_traits<T>::is_zero(v);
        else
            return v == T(0);
    }
    static void check_same(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError("matrix dimension mismatch");
    }

    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<long long>;

template <class T>
std::vector<T> column_of(const IntMatrix& Y, int j)
{
    std::vector<T> v(Y.rows());
    for (int i = 0; i < Y.rows(); ++i)
        v[i] = T(static_cast<long>(Y(i, j)));
    return v;
}

// Symmetric matrix; every mutation keeps entries[i][j] == entries[j][i].
template <class T>
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n, const T& fill = T(0)) : m_(n, n, fill) {}
    SymMatrix(std::initializer_list<std::initializer_list<T>> rows) : SymMatrix(Matrix<T>(rows)) {}
    explicit SymMatrix(const Matrix<T>& m) : m_(m)
    {
        if (m.rows() != m.cols())
            throw DimensionError("symmetric matrix must be square");
        for (int i = 0; i < m.rows(); ++i)
            for (int j = i + 1; j < m.cols(); ++j)
                if (!(m(i, j) == m(j, i)))
                    throw Error("matrix is not symmetric");
    }

    static SymMatrix identity(int n) { return SymMatrix(Matrix<T>::identity(n)); }

    // Symmetrizes (m + m^t)/2; for floating results of exact-in-theory computations.
    static SymMatrix symmetrized(const Matrix<T>& m)
    {
        SymMatrix s(m.rows());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = i; j < m.rows(); ++j)
                s.set(i, j, (m(i, j) + m(j, i)) / T(2));
        return s;
    }

    int n() const { return m_.rows(); }
    const T& operator()(int i, int j) const { return m_(i, j); }
    void set(int i, int j, const T& v)
    {
        m_(i, j) = v;
        m_(j, i) = v;
    }
    const Matrix<T>& matrix() const { return m_; }

    template <class U>
    SymMatrix<U> cast() const
    {
        SymMatrix<U> s(n());
        for (int i = 0; i < n(); ++i)
            for (int j = i; j < n(); ++j)
                s.set(i, j, U(m_(i, j)));
        return s;
    }

    friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.m_ == b.m_; }
    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ + b.m_, 0); }
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ - b.m_, 0); }
    friend SymMatrix operator*(const T& s, const SymMatrix& a) { return SymMatrix(s * a.m_, 0); }

private:
    SymMatrix(const Matrix<T>& m, int) : m_(m) {}
    Matrix<T> m_;
};

template <class T>
SymMatrix<double> to_double(const SymMatrix<T>& s)
{
    SymMatrix<double> d(s.n());
    for (int i = 0; i < s.n(); ++i)
        for (int j = i; j < s.n(); ++j)
            d.set(i, j, scalar_traits<T>::to_double(s(i, j)));
    return d;
}

template <class T>
Matrix<double> to_double(const Matrix<T>& s)
{
    Matrix<double> d(s.rows(), s.cols());
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) {
            if constexpr (std::is_integral_v<T>)
                d(i, j) = static_cast<double>(s(i, j));
            else
                d(i, j) = scalar_traits<T>::to_double(s(i, j));
        }
    return d;
}

// ---- Sym_n coordinates: upper triangle, row-major ----

inline int sym_dim(int n) { return n * (n + 1) / 2; }

inline std::vector<std::pair<int, int>> sym_index(int n)
{
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            idx.emplace_back(i, j);
    return idx;
}

template <class T>
std::vector<T> sym_vector(const SymMatrix<T>& s)
{
    std::vector<T> v;
    for (auto [i, j] : sym_index(s.n()))
        v.push_back(s(i, j));
    return v;
}

template <class T>
SymMatrix<T> sym_from_vector(int n, const std::vector<T>& v)
{
    SymMatrix<T> s(n);
    auto idx = sym_index(n);
    for (std::size_t k = 0; k < idx.size(); ++k)
        s.set(idx[k].first, idx[k].second, v[k]);
    return s;
}

// Trace inner product in upper-triangle coordinates.
template <class T>
T sym_dot(int n, const std::vector<T>& a, const std::vector<T>& b)
{
    auto idx = sym_index(n);
    T acc = T(0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        T p = a[k] * b[k];
        acc += (idx[k].first == idx[k].second) ? p : p + p;
    }
    return acc;
}

template <class T>
T trace_inner(const SymMatrix<T>& a, const SymMatrix<T>& b)
{
    if (a.n() != b.n())
        throw DimensionError("trace_inner dimension mismatch");
    T acc = T(0);
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j)
            acc += a(i, j) * b(j, i);
    return acc;
}

// y y^t for a column y
template <class T>
SymMatrix<T> outer(const std::vector<T>& y)
{
    int n = static_cast<int>(y.size());
    SymMatrix<T> s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            s.set(i, j, y[i] * y[j]);
    return s;
}

template <class T>
T quad_form(const SymMatrix<T>& Q, const std::vector<T>& y)
{
    T acc = T(0);
    for (int i = 0; i < Q.n(); ++i)
        for (int j = 0; j < Q.n(); ++j)
            acc += y[i] * Q(i, j) * y[j];
    return acc;
}

// ---- Gaussian elimination over a field (exact) or with partial pivoting (double) ----

template <class T>
struct RowEchelon {
    Matrix<T> R;
    std::vector<int> pivots;
};

template <class T>
RowEchelon<T> rref(Matrix<T> A, double tol = 1e-12)
{
    using tr = scalar_traits<T>;
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < A.cols() && r < A.rows(); ++c) {
        int p = -1;
        if constexpr (is_exact_v<T>) {
            for (int i = r; i < A.rows(); ++i)
                if (!tr::is_zero(A(i, c))) {
                    p = i;
                    break;
                }
        } else {
            double best = tol;
            for (int i = r; i < A.rows(); ++i)
                if (std::abs(A(i, c)) > best) {
                    best = std::abs(A(i, c));
                    p = i;
                }
        }
        if (p < 0)
            continue;
        if (p != r)
            for (int j = 0; j < A.cols(); ++j)
                std::swap(A(p, j), A(r, j));
        T inv = T(1) / A(r, c);
        for (int j = 0; j < A.cols(); ++j)
            A(r, j) = A(r, j) * inv;
        for (int i = 0; i < A.rows(); ++i) {
            if (i == r || tr::is_zero(A(i, c)))
                continue;
            T f = A(i, c);
            for (int j = 0; j < A.cols(); ++j)
                A(i, j) -= f * A(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return {A, piv};
}

template <class T>
int rank(const Matrix<T>& A)
{
    return static_cast<int>(rref(A).pivots.size());
}

inline int rank(const IntMatrix& Y)
{
    return rank(Y.cast<Rational>());
}

template <class T>
T determinant(Matrix<T> A)
{
    if (A.rows() != A.cols())
        throw DimensionError("determinant of non-square matrix");
    int n = A.rows();
    T det = T(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        if constexpr (is_exact_v<T>) {
            for (int i = c; i < n; ++i)
                if (!scalar_traits<T>::is_zero(A(i, c))) {
                    p = i;
                    break;
                }
        } else {
            double best = 0;
            for (int i = c; i < n; ++i)
                if (std::abs(A(i, c)) > best) {
                    best = std::abs(A(i, c));
                    p = i;
                }
        }
        if (p < 0)
            return T(0);
        if (p != c) {
            for (int j = 0; j < n; ++j)
                std::swap(A(p, j), A(c, j));
            det = -det;
        }
        det = det * A(c, c);
        T inv = T(1) / A(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (scalar_traits<T>::is_zero(A(i, c)))
                continue;
            T f = A(i, c) * inv;
            for (int j = c; j < n; ++j)
                A(i, j) -= f * A(c, j);
        }
    }
    return det;
}

template <class T>
T determinant(const SymMatrix<T>& S)
{
    return determinant(S.matrix());
}

inline Integer int_determinant(const IntMatrix& Y)
{
    Rational d = determinant(Y.cast<Rational>());
    return d.get_num();
}

// Solve A X = B for square nonsingular A.
template <class T>
Matrix<T> solve(const Matrix<T>& A, const Matrix<T>& B)
{
    if (A.rows() != A.cols() || A.rows() != B.rows())
        throw DimensionError("solve dimension mismatch");
    int n = A.rows();
    Matrix<T> aug(n, n + B.cols());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            aug(i, j) = A(i, j);
        for (int j = 0; j < B.cols(); ++j)
            aug(i, n + j) = B(i, j);
    }
    auto e = rref(aug, 1e-300);
    if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1)
        throw SingularMatrixError("singular matrix in solve");
    Matrix<T> X(n, B.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < B.cols(); ++j)
            X(i, j) = e.R(i, n + j);
    return X;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& A)
{
    return solve(A, Matrix<T>::identity(A.rows()));
}

template <class T>
SymMatrix<T> inverse(const SymMatrix<T>& S)
{
    Matrix<T> inv = inverse(S.matrix());
    if constexpr (is_exact_v<T>)
        return SymMatrix<T>(inv);
    else
        return SymMatrix<T>::symmetrized(inv);
}

// Basis of the right null space (exact types), one vector per free column.
template <class T>
std::vector<std::vector<T>> nullspace(const Matrix<T>& A)
{
    auto e = rref(A);
    std::vector<bool> is_piv(A.cols(), false);
    for (int p : e.pivots)
        is_piv[p] = true;
    std::vector<std::vector<T>> basis;
    for (int f = 0; f < A.cols(); ++f) {
        if (is_piv[f])
            continue;
        std::vector<T> v(A.cols(), T(0));
        v[f] = T(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[e.pivots[r]] = -e.R(static_cast<int>(r), f);
        basis.push_back(v);
    }
    return basis;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m)
{
    os << "[";
    for (int i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < m.cols(); ++j)
            os << (j ? ", " : "") << m(i, j);
    }
    return os << "]";
}

template <class T>
std::ostream& operator<<(std::ostream& os, const SymMatrix<T>& m)
{
    return os << m.matrix();
}

} // namespace tori
