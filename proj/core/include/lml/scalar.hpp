#pragma once

#include <string>
#include <vector>

#include "lml/rational.hpp"

namespace lml {

// Nonnegative magnitudes with an exact tier and a logarithmic tier.
//
// Norm computations in this library need three things at once:
//   * exact rational answers whenever the closed form is rational, so that
//     equality assertions in tests are honest equalities;
//   * exact handling of expressions like (3/2)^(2/3) that appear when the
//     space exponents are rational but not integers;
//   * graceful degradation once values leave any fixed-precision range
//     (weights of generated spaces easily clear 2^4096).
//
// A Scalar is one of
//   Exact: coeff * prod_i base_i^exp_i, with coeff a rational >= 0, each
//          base_i an integer >= 2 that is not a perfect power, each exp_i a
//          rational in (0,1), bases strictly increasing; or
//   Log:   the base-2 logarithm of the magnitude, stored as a double.
//
// Multiplication, division and rational powers are closed on the exact tier.
// Addition and subtraction stay exact when the operands have a rational
// ratio (detected by a gcd refinement of the factor lists) and otherwise
// fall back to log-sum-exp on the log tier. Comparisons are exact whenever
// the ratio is rational; otherwise they resolve relative differences down to
// roughly 1e-15 * max(1, |log2 value|), far below every tolerance used here.
class Scalar {
 public:
  struct Factor {
    Int base;  // integer >= 2, not a perfect power
    Rat exp;   // in (0,1)
  };

  Scalar() : kind_(Kind::Exact), coeff_(0) {}

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return from_rat(1); }
  static Scalar from_rat(const Rat& q);
  static Scalar from_log2(double lg);
  // Exact 2^n in the exact tier (n may be negative), log form under the Log
  // policy; exact in either representation.
  static Scalar pow2(long n);
  // base^exp for rational base > 0 and rational exp.
  static Scalar rat_pow(const Rat& base, const Rat& exp);

  bool is_zero() const { return kind_ == Kind::Exact && coeff_ == 0; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_rational() const { return is_exact() && factors_.empty(); }
  // Throws std::logic_error unless is_rational().
  const Rat& as_rat() const;

  const Rat& coeff() const { return coeff_; }
  const std::vector<Factor>& factors() const { return factors_; }

  // -inf for zero. For exact values this is recomputed on demand.
  double log2() const;
  // May overflow to +inf; callers needing huge magnitudes use log2().
  double to_double() const;

  Scalar mul(const Scalar& o) const;
  Scalar div(const Scalar& o) const;
  Scalar add(const Scalar& o) const;
  // Checked monus: throws std::domain_error if the result would be negative.
  // Equal operands give zero even when equality is only resolved on the log
  // tier.
  Scalar sub(const Scalar& o) const;
  Scalar pow(const Rat& e) const;
  Scalar mul_rat(const Rat& c) const;

  // Three-way compare: exact when the ratio refines to a rational, log2
  // doubles otherwise (see the resolution note above).
  int cmp(const Scalar& o) const;
  bool equals(const Scalar& o) const { return cmp(o) == 0; }

  std::string str() const;

 private:
  enum class Kind { Exact, Log };

  void insert_factor(Int base, Rat e);
  void refine_coprime();
  double exact_log2() const;

  Kind kind_;
  Rat coeff_;                    // exact tier; value 0 means the Scalar is 0
  std::vector<Factor> factors_;  // exact tier
  double log2_ = 0.0;            // log tier
};

inline Scalar operator*(const Scalar& a, const Scalar& b) { return a.mul(b); }
inline Scalar operator/(const Scalar& a, const Scalar& b) { return a.div(b); }
inline Scalar operator+(const Scalar& a, const Scalar& b) { return a.add(b); }
inline Scalar operator-(const Scalar& a, const Scalar& b) { return a.sub(b); }
inline bool operator<(const Scalar& a, const Scalar& b) { return a.cmp(b) < 0; }
inline bool operator>(const Scalar& a, const Scalar& b) { return a.cmp(b) > 0; }
inline bool operator<=(const Scalar& a, const Scalar& b) { return a.cmp(b) <= 0; }
inline bool operator>=(const Scalar& a, const Scalar& b) { return a.cmp(b) >= 0; }
inline bool operator==(const Scalar& a, const Scalar& b) { return a.cmp(b) == 0; }
inline bool operator!=(const Scalar& a, const Scalar& b) { return a.cmp(b) != 0; }

// Construction policy, settable from the CLI via LML_MODE.
//   Auto:  exact where possible, silent fallback to the log tier.
//   Exact: operations that would leave the exact tier throw
//          std::runtime_error. Only usable for pipelines whose data is
//          rational end to end (indicator functions, integer weights).
//   Log:   everything is built directly on the log tier.
enum class ScalarPolicy { Auto, Exact, Log };
void set_scalar_policy(ScalarPolicy p);
ScalarPolicy scalar_policy();

}  // namespace lml
