#include "picoh/coefficients.hpp"

#include <ostream>

namespace picoh {

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw division_by_zero();
    v_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            mpq_class q(s, 10);
            q.canonicalize();
            return Rational(q);
        }
        mpz_class num(s.substr(0, slash), 10);
        mpz_class den(s.substr(slash + 1), 10);
        if (den == 0) throw division_by_zero();
        mpq_class q(num, den);
        q.canonicalize();
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw validation_error("malformed rational literal: \"" + s + "\"");
    }
}

Rational Rational::operator/(const Rational& o) const {
    if (o.v_ == 0) throw division_by_zero();
    return Rational(mpq_class(v_ / o.v_));
}

Rational Rational::inverse() const {
    if (v_ == 0) throw division_by_zero();
    return Rational(mpq_class(1 / v_));
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

DualNumber DualNumber::inverse() const {
    if (value.is_zero()) throw not_invertible("dual number with zero value part is not a unit");
    Rational vi = value.inverse();
    return {vi, -(vi * vi * eps)};
}

std::ostream& operator<<(std::ostream& os, const DualNumber& d) {
    return os << d.value << " + " << d.eps << "*eps";
}

} // namespace picoh
