#pragma once

#include <string>

#include "lml/rational.hpp"
#include "lml/scalar.hpp"

namespace lml {

// Nonnegative magnitude 2^x with the exponent x kept as an exact rational,
// plus a distinguished zero. This is the number type for symmetry-reduced
// computations on generated spaces, where weights reach 2^(10^23): such
// exponents overflow the 53-bit mantissa of a double outright, yet ratios of
// these magnitudes are always moderate, so products, powers and comparisons
// must cancel the exponents exactly.
//
// Multiplication, division, rational powers and comparisons are exact.
// Addition and subtraction add a log-sum-exp correction to the dominant
// exponent; the correction is computed in double precision and then embedded
// exactly (every double is a dyadic rational), so results are deterministic
// and carry about 1e-16 relative error per operation. The gap to the 1e-9
// tolerances used downstream is five orders of magnitude.
class LogExp {
 public:
  LogExp() : zero_(true), x_(0) {}

  static LogExp zero() { return LogExp(); }
  static LogExp one() { return pow2(Rat(0)); }
  static LogExp pow2(const Rat& x);
  static LogExp pow2_int(const Int& e);
  // Dyadic rationals convert exactly; anything else lands within one double
  // rounding of the true logarithm.
  static LogExp from_rat(const Rat& v);
  static LogExp from_scalar(const Scalar& s);

  bool is_zero() const { return zero_; }
  // log2 of the value; throws on zero.
  const Rat& exponent() const;

  LogExp mul(const LogExp& o) const;
  LogExp div(const LogExp& o) const;
  LogExp add(const LogExp& o) const;
  // Checked monus, exact zero on exact equality.
  LogExp sub(const LogExp& o) const;
  LogExp pow(const Rat& e) const;
  LogExp mul_rat(const Rat& c) const { return mul(from_rat(c)); }

  int cmp(const LogExp& o) const;
  bool equals(const LogExp& o) const { return cmp(o) == 0; }

  double log2d() const;  // -inf for zero
  double to_double() const;
  // Hand-off for comparisons against explicit-tier results. Exact for
  // moderate powers of two, otherwise lossy through a double exponent,
  // which is legitimate whenever an explicit tier exists at all.
  Scalar to_scalar() const;

  std::string str() const;

 private:
  bool zero_;
  Rat x_;
};

inline LogExp operator*(const LogExp& a, const LogExp& b) { return a.mul(b); }
inline LogExp operator/(const LogExp& a, const LogExp& b) { return a.div(b); }
inline LogExp operator+(const LogExp& a, const LogExp& b) { return a.add(b); }
inline LogExp operator-(const LogExp& a, const LogExp& b) { return a.sub(b); }
inline bool operator<(const LogExp& a, const LogExp& b) { return a.cmp(b) < 0; }
inline bool operator>(const LogExp& a, const LogExp& b) { return a.cmp(b) > 0; }
inline bool operator<=(const LogExp& a, const LogExp& b) { return a.cmp(b) <= 0; }
inline bool operator>=(const LogExp& a, const LogExp& b) { return a.cmp(b) >= 0; }
inline bool operator==(const LogExp& a, const LogExp& b) { return a.cmp(b) == 0; }
inline bool operator!=(const LogExp& a, const LogExp& b) { return a.cmp(b) != 0; }

}  // namespace lml
