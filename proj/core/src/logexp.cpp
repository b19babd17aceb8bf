#include "lml/logexp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lml {

namespace {

// Doubles are dyadic rationals, so this embedding is exact and keeps
// repeated additions deterministic.
Rat rat_of_double(double v) {
  Rat r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

}  // namespace

LogExp LogExp::pow2(const Rat& x) {
  LogExp r;
  r.zero_ = false;
  r.x_ = x;
  return r;
}

LogExp LogExp::pow2_int(const Int& e) { return pow2(Rat(e)); }

LogExp LogExp::from_rat(const Rat& v) {
  if (sgn(v) < 0) throw std::domain_error("LogExp: negative value");
  if (sgn(v) == 0) return zero();
  const Int& num = v.get_num();
  const Int& den = v.get_den();
  // Powers of two convert exactly however large they are.
  if (den == 1 && is_power_of_two(num))
    return pow2(Rat(static_cast<long>(mpz_scan1(num.get_mpz_t(), 0))));
  if (num == 1 && is_power_of_two(den))
    return pow2(Rat(-static_cast<long>(mpz_scan1(den.get_mpz_t(), 0))));
  return pow2(rat_of_double(log2_rat(v)));
}

LogExp LogExp::from_scalar(const Scalar& s) {
  if (s.is_zero()) return zero();
  if (s.is_rational()) return from_rat(s.as_rat());
  return pow2(rat_of_double(s.log2()));
}

const Rat& LogExp::exponent() const {
  if (zero_) throw std::domain_error("LogExp: zero has no exponent");
  return x_;
}

LogExp LogExp::mul(const LogExp& o) const {
  if (zero_ || o.zero_) return zero();
  return pow2(x_ + o.x_);
}

LogExp LogExp::div(const LogExp& o) const {
  if (o.zero_) throw std::domain_error("LogExp: division by zero");
  if (zero_) return zero();
  return pow2(x_ - o.x_);
}

LogExp LogExp::add(const LogExp& o) const {
  if (zero_) return o;
  if (o.zero_) return *this;
  const Rat& big = x_ >= o.x_ ? x_ : o.x_;
  const Rat& small = x_ >= o.x_ ? o.x_ : x_;
  Rat d = big - small;
  // Huge gaps collapse to the dominant term on their own: get_d saturates
  // to +inf and exp2 underflows to zero.
  double corr = std::log2(1.0 + std::exp2(-d.get_d()));
  return pow2(big + rat_of_double(corr));
}

LogExp LogExp::sub(const LogExp& o) const {
  int c = cmp(o);
  if (c < 0) throw std::domain_error("LogExp: subtraction underflow");
  if (c == 0) return zero();
  if (o.zero_) return *this;
  Rat d = x_ - o.x_;
  double corr = std::log2(1.0 - std::exp2(-d.get_d()));
  return pow2(x_ + rat_of_double(corr));
}

LogExp LogExp::pow(const Rat& e) const {
  if (zero_) {
    if (sgn(e) > 0) return zero();
    throw std::domain_error("LogExp: zero to a nonpositive power");
  }
  return pow2(x_ * e);
}

int LogExp::cmp(const LogExp& o) const {
  if (zero_ && o.zero_) return 0;
  if (zero_) return -1;
  if (o.zero_) return 1;
  return ::cmp(x_, o.x_);
}

double LogExp::log2d() const {
  if (zero_) return -std::numeric_limits<double>::infinity();
  return x_.get_d();
}

double LogExp::to_double() const {
  if (zero_) return 0.0;
  return std::exp2(x_.get_d());
}

Scalar LogExp::to_scalar() const {
  if (zero_) return Scalar::zero();
  if (x_.get_den() == 1) {
    Rat a = abs(x_);
    if (a.get_num() <= 8192) return Scalar::pow2(x_.get_num().get_si());
  }
  return Scalar::from_log2(log2d());
}

std::string LogExp::str() const {
  if (zero_) return "0";
  std::ostringstream out;
  out << "2^" << log2d();
  return out.str();
}

}  // namespace lml
