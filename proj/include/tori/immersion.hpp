#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "logdet_opt.hpp"
#include "matrix.hpp"

namespace tori {

template <class T>
struct MatrixData {
    int n = 0, N = 0;
    SymMatrix<T> Q;
    IntMatrix Y;
    std::vector<T> weights; // c_j^2
};

template <class U, class T>
MatrixData<U> cast_data(const MatrixData<T>& d)
{
    MatrixData<U> o;
    o.n = d.n;
    o.N = d.N;
    o.Y = d.Y;
    SymMatrix<U> Q(d.n);
    for (int i = 0; i < d.n; ++i)
        for (int j = i; j < d.n; ++j) {
            if constexpr (std::is_same_v<U, double>)
                Q.set(i, j, scalar_traits<T>::to_double(d.Q(i, j)));
            else
                Q.set(i, j, U(d.Q(i, j)));
        }
    o.Q = Q;
    for (const auto& w : d.weights) {
        if constexpr (std::is_same_v<U, double>)
            o.weights.push_back(scalar_traits<T>::to_double(w));
        else
            o.weights.push_back(U(w));
    }
    return o;
}

// ---------------------------------------------------------------- report

enum class Verdict { verified, falsified, indeterminate };

inline const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::verified:
        return "verified";
    case Verdict::falsified:
        return "falsified";
    default:
        return "indeterminate";
    }
}

struct Residual {
    std::string equation; // ellipsoid, flat, weights, norm, eigen-cos, eigen-sin, eutactic, iso-cos, iso-sin, psd
    std::string key;      // eta for per-eta equations
    double value = 0;     // nonnegative size of the violation
    bool exact_zero = false;
};

struct VerificationReport {
    Verdict verdict = Verdict::verified;
    std::string reason;
    double tolerance = 1e-10;
    bool exact = false;
    std::vector<Residual> residuals;
    std::optional<double> psd_margin;

    double max_residual(const std::string& eq = "") const
    {
        double m = 0;
        for (const auto& r : residuals)
            if (eq.empty() || r.equation == eq)
                m = std::max(m, r.value);
        return m;
    }
    bool verified() const { return verdict == Verdict::verified; }
};

namespace detail {

// fold one residual into the verdict
inline void judge(VerificationReport& rep, const Residual& r)
{
    rep.residuals.push_back(r);
    Verdict v;
    if (rep.exact)
        v = r.exact_zero ? Verdict::verified : Verdict::falsified;
    else if (r.value <= rep.tolerance)
        v = Verdict::verified;
    else if (r.value <= 100 * rep.tolerance)
        v = Verdict::indeterminate;
    else
        v = Verdict::falsified;
    if (v == Verdict::falsified && rep.verdict != Verdict::falsified) {
        rep.verdict = Verdict::falsified;
        rep.reason = r.equation;
    } else if (v == Verdict::indeterminate && rep.verdict == Verdict::verified) {
        rep.verdict = Verdict::indeterminate;
        rep.reason = r.equation;
    }
}

template <class T>
Residual residual_of(const std::string& eq, const std::string& key, const std::vector<T>& vals)
{
    Residual r{eq, key, 0.0, true};
    for (const auto& v : vals) {
        if (!scalar_traits<T>::is_zero(v))
            r.exact_zero = false;
        r.value = std::max(r.value, std::abs(scalar_traits<T>::to_double(v)));
    }
    if constexpr (is_exact_v<T>) {
        if (!r.exact_zero && r.value == 0)
            r.value = std::numeric_limits<double>::min();
    }
    return r;
}

inline std::string vec_key(const IntVector& v)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

} // namespace detail

inline bool columns_pairwise_independent(const IntMatrix& Y)
{
    for (int r = 0; r < Y.cols(); ++r)
        for (int s = r + 1; s < Y.cols(); ++s)
            if (rank(Y.select_cols({r, s})) < 2)
                return false;
    return true;
}

template <class T>
VerificationReport verify_matrix_data(const MatrixData<T>& d, double tol = 1e-10)
{
    VerificationReport rep;
    rep.tolerance = tol;
    rep.exact = is_exact_v<T>;
    if (d.Q.n() != d.n || d.Y.rows() != d.n || d.Y.cols() != d.N || static_cast<int>(d.weights.size()) != d.N)
        throw DimensionError("matrix data dimensions disagree");
    if (d.N == 0 || rank(d.Y) < d.n || !columns_pairwise_independent(d.Y)) {
        rep.verdict = Verdict::falsified;
        rep.reason = "structure";
        return rep;
    }
    std::vector<T> ell;
    for (int j = 0; j < d.N; ++j)
        ell.push_back(quad_form(d.Q, column_of<T>(d.Y, j)) - T(1));
    detail::judge(rep, detail::residual_of("ellipsoid", "", ell));

    SymMatrix<T> Qinv;
    try {
        Qinv = inverse(d.Q);
    } catch (const SingularMatrixError&) {
        rep.verdict = Verdict::falsified;
        rep.reason = "flat";
        return rep;
    }
    SymMatrix<T> F = hull_matrix(d.Y, d.weights) - (T(1) / T(d.n)) * Qinv;
    detail::judge(rep, detail::residual_of("flat", "", sym_vector(F)));

    T sum = T(0);
    for (const auto& w : d.weights)
        sum += w;
    std::vector<T> wr{sum - T(1)};
    Residual r = detail::residual_of("weights", "", wr);
    for (const auto& w : d.weights) {
        if constexpr (is_exact_v<T>) {
            if (scalar_traits<T>::sign(w) <= 0) {
                r.exact_zero = false;
                r.value = std::max(r.value, std::max(std::abs(scalar_traits<T>::to_double(w)), 1.0));
            }
        } else {
            if (w <= 0)
                r.value = std::max(r.value, w == 0 ? 100 * tol : std::max(-w, 100 * tol) * 1.0000001);
        }
    }
    detail::judge(rep, r);
    return rep;
}

// ---------------------------------------------------------------- eta sets

struct EtaPair {
    int r, s;    // r < s, zero-based
    int sigma;   // Y_r + sigma Y_s
    int epsilon; // Y_r + sigma Y_s = epsilon * eta
};

using EtaSystem = std::map<IntVector, std::vector<EtaPair>>;

inline EtaSystem eta_sets(const IntMatrix& Y)
{
    EtaSystem E;
    int n = Y.rows(), N = Y.cols();
    for (int r = 0; r < N; ++r)
        for (int s = r + 1; s < N; ++s)
            for (int sigma : {1, -1}) {
                IntVector v(n);
                for (int i = 0; i < n; ++i)
                    v[i] = Y(i, r) + sigma * Y(i, s);
                int eps = 1;
                IntVector key = canonical_sign(v, &eps);
                E[key].push_back({r, s, sigma, eps});
            }
    return E;
}

// ---------------------------------------------------------------- general immersions

class GramOperator {
public:
    GramOperator() = default;
    explicit GramOperator(int N) : N_(N), M_(Eigen::MatrixXd::Zero(2 * N, 2 * N)) {}

    static GramOperator diagonal(const std::vector<double>& a)
    {
        GramOperator g(static_cast<int>(a.size()));
        for (int r = 0; r < g.N_; ++r)
            g.set_diagonal(r, a[r]);
        return g;
    }

    int N() const { return N_; }
    const Eigen::MatrixXd& matrix() const { return M_; }
    double diagonal_value(int r) const { return M_(2 * r, 2 * r); }
    void set_diagonal(int r, double a)
    {
        M_(2 * r, 2 * r) = M_(2 * r + 1, 2 * r + 1) = a;
        M_(2 * r, 2 * r + 1) = M_(2 * r + 1, 2 * r) = 0;
    }
    // A_rs for r != s; A_sr becomes the transpose
    void set_block(int r, int s, const Eigen::Matrix2d& B)
    {
        if (r == s)
            throw Error("diagonal blocks are scalar");
        M_.block<2, 2>(2 * r, 2 * s) = B;
        M_.block<2, 2>(2 * s, 2 * r) = B.transpose();
    }
    Eigen::Matrix2d block(int r, int s) const { return M_.block<2, 2>(2 * r, 2 * s); }

    GramOperator diagonal_part() const
    {
        GramOperator g(N_);
        for (int r = 0; r < N_; ++r)
            g.set_diagonal(r, diagonal_value(r));
        return g;
    }

    friend GramOperator operator+(const GramOperator& a, const GramOperator& b)
    {
        if (a.N_ != b.N_)
            throw DimensionError("gram operator size mismatch");
        GramOperator g(a.N_);
        g.M_ = a.M_ + b.M_;
        return g;
    }
    friend GramOperator operator*(double t, const GramOperator& a)
    {
        GramOperator g(a.N_);
        g.M_ = t * a.M_;
        return g;
    }

private:
    int N_ = 0;
    Eigen::MatrixXd M_;
};

template <class T>
GramOperator diagonal_lift(const MatrixData<T>& d)
{
    std::vector<double> a;
    for (const auto& w : d.weights)
        a.push_back(scalar_traits<T>::to_double(w));
    return GramOperator::diagonal(a);
}

inline VerificationReport verify_full(const GramOperator& g, const SymMatrix<double>& Q, const IntMatrix& Y, double tol = 1e-10)
{
    int n = Y.rows(), N = Y.cols();
    if (g.N() != N || Q.n() != n)
        throw DimensionError("gram operator and geometry disagree");
    VerificationReport rep;
    rep.tolerance = tol;
    rep.exact = false;
    if (N == 0 || rank(Y) < n || !columns_pairwise_independent(Y)) {
        rep.verdict = Verdict::falsified;
        rep.reason = "structure";
        return rep;
    }
    std::vector<double> ell;
    for (int j = 0; j < N; ++j)
        ell.push_back(quad_form(Q, column_of<double>(Y, j)) - 1);
    detail::judge(rep, detail::residual_of("ellipsoid", "", ell));

    double sum = 0;
    for (int r = 0; r < N; ++r)
        sum += g.diagonal_value(r);
    detail::judge(rep, detail::residual_of("norm", "", std::vector<double>{sum - 1}));

    auto E = eta_sets(Y);
    for (const auto& [eta, pairs] : E) {
        std::string key = detail::vec_key(eta);
        double nc = 0, ns = 0;
        Eigen::MatrixXd ic = Eigen::MatrixXd::Zero(n, n), is = Eigen::MatrixXd::Zero(n, n);
        for (const auto& p : pairs) {
            Eigen::Matrix2d B = g.block(p.r, p.s);
            double m11 = B(0, 0), m12 = p.sigma * B(0, 1), m21 = B(1, 0), m22 = p.sigma * B(1, 1);
            Eigen::VectorXd yr(n), ys(n);
            for (int i = 0; i < n; ++i) {
                yr(i) = static_cast<double>(Y(i, p.r));
                ys(i) = static_cast<double>(Y(i, p.s));
            }
            Eigen::MatrixXd S = yr * ys.transpose() + ys * yr.transpose();
            nc += m11 - m22;
            ns += p.epsilon * (m12 + m21);
            ic += p.sigma * (m11 - m22) * S;
            is += p.epsilon * p.sigma * (m12 + m21) * S;
        }
        detail::judge(rep, detail::residual_of("eigen-cos", key, std::vector<double>{nc}));
        detail::judge(rep, detail::residual_of("eigen-sin", key, std::vector<double>{ns}));
        std::vector<double> vc(ic.data(), ic.data() + ic.size()), vs(is.data(), is.data() + is.size());
        detail::judge(rep, detail::residual_of("iso-cos", key, vc));
        detail::judge(rep, detail::residual_of("iso-sin", key, vs));
    }

    Eigen::MatrixXd eut = -to_eigen(inverse(Q)) / n;
    for (int r = 0; r < N; ++r) {
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i)
            y(i) = static_cast<double>(Y(i, r));
        eut += g.diagonal_value(r) * y * y.transpose();
    }
    std::vector<double> ve(eut.data(), eut.data() + eut.size());
    detail::judge(rep, detail::residual_of("eutactic", "", ve));

    double margin = min_eigenvalue(g.matrix());
    rep.psd_margin = margin;
    detail::judge(rep, Residual{"psd", "", std::max(0.0, -margin), margin >= 0});
    return rep;
}

inline bool is_homogeneous(const GramOperator& g, double tol = 1e-10)
{
    for (int r = 0; r < g.N(); ++r)
        for (int s = r + 1; s < g.N(); ++s)
            if (g.block(r, s).cwiseAbs().maxCoeff() > tol)
                return false;
    return true;
}

inline GramOperator deformation_path(const GramOperator& g0, const GramOperator& g1, double t)
{
    if (g0.N() != g1.N())
        throw DimensionError("deformation endpoints have different sizes");
    if (t < 0 || t > 1)
        throw Error("deformation parameter outside [0,1]");
    return (1 - t) * g0 + t * g1;
}

// ---------------------------------------------------------------- embeddedness

enum class Embedding { embedded, not_embedded, unknown };

inline const char* embedding_name(Embedding e)
{
    switch (e) {
    case Embedding::embedded:
        return "embedded";
    case Embedding::not_embedded:
        return "not_embedded";
    default:
        return "unknown";
    }
}

struct EmbeddingResult {
    Embedding status = Embedding::unknown;
    std::string method; // unit-minor, determinant, exhaustive
    std::vector<Rational> witness;
};

namespace detail {

inline bool next_combination(std::vector<int>& c, int N)
{
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i)
        if (c[i] < N - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j)
                c[j] = c[j - 1] + 1;
            return true;
        }
    return false;
}

// nonzero u in (-1,1)^n with Y^t u integral, reduced into [0,1)^n
inline std::optional<std::vector<Rational>> collapse_witness(const IntMatrix& Y)
{
    int n = Y.rows(), N = Y.cols();
    std::vector<long long> l1(N, 0);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < n; ++i)
            l1[j] += std::llabs(Y(i, j));
    std::vector<int> comb(n), best;
    for (int i = 0; i < n; ++i)
        comb[i] = i;
    double best_box = std::numeric_limits<double>::infinity();
    do {
        if (int_determinant(Y.select_cols(comb)) == 0)
            continue;
        double box = 1;
        for (int j : comb)
            box *= static_cast<double>(2 * l1[j] - 1);
        if (box < best_box) {
            best_box = box;
            best = comb;
        }
    } while (next_combination(comb, N));
    if (best.empty())
        throw DimensionError("Y must have rank n");
    if (best_box > 5e7)
        throw UnsupportedError("embedding search box too large");
    Matrix<Rational> YS = Y.select_cols(best).cast<Rational>();
    Matrix<Rational> inv = inverse(YS.transpose());
    std::vector<std::vector<Rational>> found;
    std::vector<long long> m(n);
    for (int i = 0; i < n; ++i)
        m[i] = -(l1[best[i]] - 1);
    for (;;) {
        std::vector<Rational> u(n, Rational(0));
        bool nz = false;
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k)
                if (m[k] != 0)
                    u[i] += inv(i, k) * Rational(static_cast<long>(m[k]));
            if (u[i] != 0)
                nz = true;
        }
        bool ok = nz;
        for (int i = 0; i < n && ok; ++i)
            if (abs(u[i]) >= 1)
                ok = false;
        for (int j = 0; j < N && ok; ++j) {
            Rational th = 0;
            for (int i = 0; i < n; ++i)
                th += Rational(static_cast<long>(Y(i, j))) * u[i];
            if (th.get_den() != 1)
                ok = false;
        }
        if (ok) {
            for (auto& x : u)
                x -= Rational(floor_of(x));
            found.push_back(u);
        }
        int k = 0;
        while (k < n && m[k] == l1[best[k]] - 1) {
            m[k] = -(l1[best[k]] - 1);
            ++k;
        }
        if (k == n)
            break;
        ++m[k];
    }
    if (found.empty())
        return std::nullopt;
    auto support = [](const std::vector<Rational>& u) {
        return std::count_if(u.begin(), u.end(), [](const Rational& x) { return x != 0; });
    };
    return *std::min_element(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        auto sa = support(a), sb = support(b);
        if (sa != sb)
            return sa < sb;
        return b < a;
    });
}

} // namespace detail

inline EmbeddingResult embeddedness(const IntMatrix& Y, bool exhaustive = false)
{
    int n = Y.rows(), N = Y.cols();
    if (rank(Y) < n)
        throw DimensionError("Y must have rank n");
    std::vector<int> comb(n);
    for (int i = 0; i < n; ++i)
        comb[i] = i;
    do {
        Integer d = int_determinant(Y.select_cols(comb));
        if (abs(d) == 1)
            return {Embedding::embedded, "unit-minor", {}};
    } while (detail::next_combination(comb, N));
    if (N == n) {
        auto w = detail::collapse_witness(Y);
        return {Embedding::not_embedded, "determinant", w ? *w : std::vector<Rational>{}};
    }
    if (!exhaustive)
        return {Embedding::unknown, "unit-minor", {}};
    auto w = detail::collapse_witness(Y);
    if (w)
        return {Embedding::not_embedded, "exhaustive", *w};
    return {Embedding::embedded, "exhaustive", {}};
}

// ---------------------------------------------------------------- evaluation

// u_Y = L^{-t} w where Q^{-1} = L L^t; w are orthonormal torus coordinates
inline Eigen::VectorXd orthonormal_to_y(const SymMatrix<double>& Q, const Eigen::VectorXd& w)
{
    Eigen::MatrixXd Qinv = to_eigen(inverse(Q));
    Eigen::LLT<Eigen::MatrixXd> llt(Qinv);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefiniteError("Q is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    return L.transpose().triangularView<Eigen::Upper>().solve(w);
}

class Immersion {
public:
    Immersion(const GramOperator& g, const SymMatrix<double>& Q, const IntMatrix& Y, double tol = 1e-10) : Q_(Q), Y_(Y)
    {
        auto rep = verify_full(g, Q, Y, tol);
        if (!rep.verified())
            throw Error("refusing to evaluate an unverified immersion");
        A_ = psd_sqrt(g.matrix(), 1e-8);
    }

    template <class T>
    static Immersion from_data(const MatrixData<T>& d, double tol = 1e-10)
    {
        return Immersion(diagonal_lift(d), to_double(d.Q), d.Y, tol);
    }

    int n() const { return Y_.rows(); }
    int N() const { return Y_.cols(); }
    const SymMatrix<double>& Q() const { return Q_; }

    // u in Y-coordinates: theta_r = 2 pi <Y_r, u>
    Eigen::VectorXd operator()(const Eigen::VectorXd& u) const
    {
        int N = Y_.cols(), n = Y_.rows();
        Eigen::RowVectorXd th(2 * N);
        for (int r = 0; r < N; ++r) {
            double t = 0;
            for (int i = 0; i < n; ++i)
                t += static_cast<double>(Y_(i, r)) * u(i);
            t *= 2 * std::numbers::pi;
            th(2 * r) = std::cos(t);
            th(2 * r + 1) = std::sin(t);
        }
        return (th * A_).transpose();
    }

    Eigen::VectorXd at_orthonormal(const Eigen::VectorXd& w) const { return (*this)(orthonormal_to_y(Q_, w)); }

private:
    SymMatrix<double> Q_;
    IntMatrix Y_;
    Eigen::MatrixXd A_;
};

inline Eigen::VectorXd evaluate_immersion(const Immersion& x, const Eigen::VectorXd& u)
{
    return x(u);
}

// ---------------------------------------------------------------- target dimension

template <class T>
MatrixData<T> reduce_target_dimension(const MatrixData<T>& d, double tol = 1e-10)
{
    if (!verify_matrix_data(d, tol).verified())
        throw Error("reduction needs verified matrix data");
    if (d.N <= sym_dim(d.n))
        return d;
    HullPoint<T> hp{d.Y, d.weights, hull_matrix(d.Y, d.weights)};
    auto red = caratheodory_reduce(hp);
    MatrixData<T> o;
    o.n = d.n;
    o.N = red.Y.cols();
    o.Q = d.Q;
    o.Y = red.Y;
    o.weights = red.lambda;
    if constexpr (!is_exact_v<T>) {
        double s = 0;
        for (double w : o.weights)
            s += w;
        for (double& w : o.weights)
            w /= s;
    }
    return o;
}

} // namespace tori
