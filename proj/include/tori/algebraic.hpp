#pragma once

#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace tori {

// Real number field Q(w): w is the root of an irreducible integer polynomial inside a
// rational isolating interval. The interval given at construction is kept verbatim; a
// refined copy is cached for sign decisions and numerical evaluation.
class NumberField {
public:
    NumberField(IntPoly minpoly, Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        minpoly_ = primitive_part(minpoly);
        int d = degree(minpoly_);
        if (d < 2 || d > 4)
            throw UnsupportedError("number field degree must be 2, 3 or 4");
        if (!irreducible_degree_le4(minpoly_))
            throw Error("minimal polynomial is reducible");
        if (!(lo_ < hi_))
            throw Error("empty isolating interval");
        monic_ = to_ratpoly(minpoly_);
        Rational lead = monic_.back();
        for (auto& c : monic_)
            c /= lead;
        auto chain = sturm_chain(monic_);
        if (eval_rat(minpoly_, lo_) == 0 || eval_rat(minpoly_, hi_) == 0 || count_roots(chain, lo_, hi_) != 1)
            throw Error("interval does not isolate exactly one root");
        cache_lo_ = lo_;
        cache_hi_ = hi_;
    }

    // Q(sqrt(d)) with d > 1 squarefree; the generator is the positive square root.
    static std::shared_ptr<const NumberField> sqrt_field(const Integer& d)
    {
        if (d <= 1 || is_perfect_square(d))
            throw Error("sqrt_field needs a non-square integer above 1");
        Integer s = isqrt(d);
        return std::make_shared<NumberField>(IntPoly{-d, 0, 1}, Rational(s), Rational(s + 1));
    }

    int deg() const { return degree(minpoly_); }
    const IntPoly& minpoly() const { return minpoly_; }
    const RatPoly& monic() const { return monic_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    // x^2 - d form
    bool is_sqrt_form() const
    {
        return deg() == 2 && minpoly_[1] == 0 && minpoly_[2] == 1 && minpoly_[0] < 0 && lo_ >= 0;
    }

    IsolatingInterval refined(const Rational& width) const
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (cache_hi_ - cache_lo_ > width) {
            auto iv = refine_root(monic_, {cache_lo_, cache_hi_}, width);
            cache_lo_ = iv.lo;
            cache_hi_ = iv.hi;
        }
        return {cache_lo_, cache_hi_};
    }

    IsolatingInterval current() const
    {
        std::lock_guard<std::mutex> lock(mu_);
        return {cache_lo_, cache_hi_};
    }

    bool same_as(const NumberField& o) const
    {
        if (this == &o)
            return true;
        if (minpoly_ != o.minpoly_)
            return false;
        Rational lo = lo_ > o.lo_ ? lo_ : o.lo_;
        Rational hi = hi_ < o.hi_ ? hi_ : o.hi_;
        if (!(lo < hi))
            return false;
        auto chain = sturm_chain(monic_);
        return count_roots(chain, lo, hi) == 1;
    }

private:
    IntPoly minpoly_;
    RatPoly monic_;
    Rational lo_, hi_;
    mutable std::mutex mu_;
    mutable Rational cache_lo_, cache_hi_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

namespace detail {

struct RatInterval {
    Rational lo, hi;
};

inline RatInterval imul(const RatInterval& a, const RatInterval& b)
{
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    RatInterval r{p[0], p[0]};
    for (auto& v : p) {
        if (v < r.lo)
            r.lo = v;
        if (v > r.hi)
            r.hi = v;
    }
    return r;
}

} // namespace detail

// Element of a number field (or of Q when the field pointer is null), stored as a
// polynomial in the generator with rational coefficients.
class AlgebraicNumber {
public:
    AlgebraicNumber() : coeffs_{Rational(0)} {}
    AlgebraicNumber(int v) : coeffs_{Rational(v)} {}
    AlgebraicNumber(long v) : coeffs_{Rational(v)} {}
    AlgebraicNumber(const Rational& v) : coeffs_{v} {}
    AlgebraicNumber(const Integer& v) : coeffs_{Rational(v)} {}
    AlgebraicNumber(FieldPtr field, RatPoly coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs))
    {
        normalize();
    }

    static AlgebraicNumber generator(FieldPtr field)
    {
        return AlgebraicNumber(field, RatPoly{Rational(0), Rational(1)});
    }

    const FieldPtr& field() const { return field_; }
    // Coefficients padded to the field degree (length 1 for rationals).
    RatPoly coefficients() const
    {
        RatPoly c = coeffs_;
        std::size_t len = field_ ? static_cast<std::size_t>(field_->deg()) : 1;
        c.resize(len, Rational(0));
        return c;
    }

    bool is_rational() const { return degree(coeffs_) <= 0; }
    Rational rational_value() const
    {
        if (!is_rational())
            throw Error("algebraic number is not rational");
        return coeffs_.empty() ? Rational(0) : coeffs_[0];
    }
    bool is_zero() const { return coeffs_.empty() || degree(coeffs_) < 0; }

    int sign() const
    {
        if (is_zero())
            return 0;
        if (is_rational())
            return sgn(coeffs_[0]);
        for (int iter = 0; iter < 4000; ++iter) {
            auto iv = field_->current();
            if (iter > 0)
                iv = field_->refined((iv.hi - iv.lo) / 1024);
            detail::RatInterval x{iv.lo, iv.hi};
            detail::RatInterval acc{coeffs_.back(), coeffs_.back()};
            for (int i = static_cast<int>(coeffs_.size()) - 2; i >= 0; --i) {
                acc = detail::imul(acc, x);
                acc.lo += coeffs_[i];
                acc.hi += coeffs_[i];
            }
            if (acc.lo > 0)
                return 1;
            if (acc.hi < 0)
                return -1;
        }
        throw Error("sign evaluation did not separate from zero");
    }

    double to_double() const
    {
        if (is_rational())
            return rational_value().get_d();
        auto iv = field_->refined(Rational(1, 1) / Rational(Integer(1) << 80));
        Rational mid = (iv.lo + iv.hi) / 2;
        return eval_rat(coeffs_, mid).get_d();
    }

    long double to_long_double() const
    {
        if (is_rational())
            return static_cast<long double>(rational_value().get_d());
        auto iv = field_->refined(Rational(1, 1) / Rational(Integer(1) << 100));
        Rational mid = (iv.lo + iv.hi) / 2;
        Rational v = eval_rat(coeffs_, mid);
        // split to keep extra bits
        double hi = v.get_d();
        Rational rest = v - Rational(hi);
        return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
    }

    AlgebraicNumber operator-() const
    {
        AlgebraicNumber r = *this;
        for (auto& c : r.coeffs_)
            c = -c;
        return r;
    }

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b)
    {
        FieldPtr f = common_field(a, b);
        RatPoly r(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            r[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
            r[i] += b.coeffs_[i];
        return AlgebraicNumber(f, std::move(r));
    }

    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a + (-b); }

    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b)
    {
        FieldPtr f = common_field(a, b);
        return AlgebraicNumber(f, poly_mul(a.coeffs_, b.coeffs_));
    }

    AlgebraicNumber inverse() const
    {
        if (is_zero())
            throw SingularMatrixError("division by zero in number field");
        if (is_rational())
            return AlgebraicNumber(Rational(1) / rational_value());
        // extended Euclid: s * g + t * f = 1
        RatPoly r0 = field_->monic(), r1 = coeffs_;
        RatPoly s0{}, s1{Rational(1)};
        while (degree(r1) > 0) {
            auto [q, r] = poly_divmod(r0, r1);
            RatPoly s = poly_sub(s0, poly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        if (r1.empty())
            throw Error("element shares a factor with the minimal polynomial");
        Rational c = r1[0];
        for (auto& v : s1)
            v /= c;
        return AlgebraicNumber(field_, std::move(s1));
    }

    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a * b.inverse(); }

    AlgebraicNumber& operator+=(const AlgebraicNumber& o) { return *this = *this + o; }
    AlgebraicNumber& operator-=(const AlgebraicNumber& o) { return *this = *this - o; }
    AlgebraicNumber& operator*=(const AlgebraicNumber& o) { return *this = *this * o; }
    AlgebraicNumber& operator/=(const AlgebraicNumber& o) { return *this = *this / o; }

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).is_zero(); }
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }
    friend bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).sign() < 0; }
    friend bool operator>(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return (a - b).sign() >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const AlgebraicNumber& a)
    {
        if (a.is_rational())
            return os << format_rational(a.rational_value());
        os << "(";
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (i)
                os << " + ";
            os << format_rational(a.coeffs_[i]);
            if (i == 1)
                os << "*w";
            else if (i > 1)
                os << "*w^" << i;
        }
        return os << ")";
    }

private:
    static FieldPtr common_field(const AlgebraicNumber& a, const AlgebraicNumber& b)
    {
        if (!a.field_)
            return b.field_;
        if (!b.field_ || a.field_ == b.field_)
            return a.field_;
        if (a.is_rational())
            return b.field_;
        if (b.is_rational())
            return a.field_;
        if (!a.field_->same_as(*b.field_))
            throw FieldMismatchError("arithmetic between different number fields");
        return a.field_;
    }

    void normalize()
    {
        if (field_ && degree(coeffs_) >= field_->deg())
            coeffs_ = poly_mod(coeffs_, field_->monic());
        trim(coeffs_);
        if (coeffs_.empty())
            coeffs_.push_back(Rational(0));
    }

    FieldPtr field_;
    RatPoly coeffs_;
};

inline AlgebraicNumber sqrt_element(const FieldPtr& f, const Rational& x, const Rational& y)
{
    return AlgebraicNumber(f, RatPoly{x, y});
}

// Real root of an irreducible integer polynomial of degree <= 4 inside iv.
// Degree 1 gives a rational, degree 2 an element x + y*sqrt(d) of the normalized quadratic field.
inline AlgebraicNumber root_in_interval(const IntPoly& f_in, const IsolatingInterval& iv)
{
    IntPoly f = primitive_part(f_in);
    int deg = degree(f);
    if (deg < 1)
        throw Error("constant polynomial has no root");
    if (deg == 1)
        return AlgebraicNumber(make_rational(-f[0], f[1]));
    if (deg == 2) {
        Integer disc = f[1] * f[1] - 4 * f[2] * f[0];
        if (disc < 0)
            throw Error("quadratic without real roots");
        auto [k, d] = squarefree_split(disc);
        if (d == 1)
            throw Error("quadratic factor is reducible");
        FieldPtr fld = NumberField::sqrt_field(d);
        Rational den = Rational(2 * f[2]);
        for (int sg : {1, -1}) {
            AlgebraicNumber x = sqrt_element(fld, Rational(-f[1]) / den, Rational(sg * k) / den);
            if ((x - AlgebraicNumber(iv.lo)).sign() >= 0 && (AlgebraicNumber(iv.hi) - x).sign() >= 0)
                return x;
        }
        throw Error("interval does not contain a root");
    }
    return AlgebraicNumber::generator(std::make_shared<NumberField>(f, iv.lo, iv.hi));
}

} // namespace tori
