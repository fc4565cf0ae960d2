#ifndef PICOH_COEFFICIENTS_HPP
#define PICOH_COEFFICIENTS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "picoh/errors.hpp"

namespace picoh {

// Exact arbitrary-precision rational, always in lowest terms with positive
// denominator. Immutable value semantics; no floating point anywhere.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}          // NOLINT: implicit on purpose
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational parse(const std::string& s);  // "p/q" or "p"

    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    Rational inverse() const;

    std::string str() const;  // "p/q", "q" omitted when 1

  private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational factorial(long n) {
    Rational r(1);
    for (long k = 2; k <= n; ++k) r *= Rational(k);
    return r;
}

// k[eps]/(eps^2): value + infinitesimal part. (a+b*eps)(c+d*eps) = ac + (ad+bc)eps.
struct DualNumber {
    Rational value;
    Rational eps;

    DualNumber() = default;
    DualNumber(Rational v) : value(std::move(v)) {}  // NOLINT
    DualNumber(Rational v, Rational e) : value(std::move(v)), eps(std::move(e)) {}

    DualNumber operator+(const DualNumber& o) const { return {value + o.value, eps + o.eps}; }
    DualNumber operator-(const DualNumber& o) const { return {value - o.value, eps - o.eps}; }
    DualNumber operator*(const DualNumber& o) const {
        return {value * o.value, value * o.eps + eps * o.value};
    }
    DualNumber operator-() const { return {-value, -eps}; }

    bool operator==(const DualNumber& o) const { return value == o.value && eps == o.eps; }
    bool operator!=(const DualNumber& o) const { return !(*this == o); }

    bool is_zero() const { return value.is_zero() && eps.is_zero(); }
    bool is_unit() const { return !value.is_zero(); }

    // (a+b*eps)^-1 = a^-1 - a^-2 b eps; requires a != 0.
    DualNumber inverse() const;
};

std::ostream& operator<<(std::ostream& os, const DualNumber& d);

// Scalar concept hooks shared by the series/operator templates.
inline bool scalar_is_zero(const Rational& x) { return x.is_zero(); }
inline bool scalar_is_unit(const Rational& x) { return !x.is_zero(); }
inline Rational scalar_inverse(const Rational& x) { return x.inverse(); }
inline Rational scalar_from_rational(const Rational& q, const Rational&) { return q; }

inline bool scalar_is_zero(const DualNumber& x) { return x.is_zero(); }
inline bool scalar_is_unit(const DualNumber& x) { return x.is_unit(); }
inline DualNumber scalar_inverse(const DualNumber& x) { return x.inverse(); }
inline DualNumber scalar_from_rational(const Rational& q, const DualNumber&) { return DualNumber(q); }

} // namespace picoh

#endif
