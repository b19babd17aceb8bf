#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace lml {

using Int = mpz_class;
using Rat = mpq_class;

// Parse "3/2", "7", "-7", or a plain decimal like "0.75" into an exact
// rational. Throws std::invalid_argument on anything else.
Rat parse_rat(const std::string& text);

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Largest e with 2^e <= q, for q > 0.
long floor_log2(const Rat& q);

// q^e for integer e (e may be negative; q must be nonzero then).
Rat pow_rat(const Rat& q, long e);

// n^e for non-negative integer exponent.
inline Int pow_int(const Int& n, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), n.get_mpz_t(), e);
  return r;
}

inline bool is_power_of_two(const Int& n) {
  return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

// Exact double conversion helpers. mpz/mpq -> double is correctly rounded by
// GMP, but values beyond ~2^1023 overflow; callers that may see such
// magnitudes should go through Scalar's log form instead.
inline double to_double(const Rat& q) { return q.get_d(); }

// log2 of a positive integer, accurate to ~1e-16 relative error even for
// values far beyond double range (uses mpz_get_d_2exp).
double log2_int(const Int& n);

inline double log2_rat(const Rat& q) {
  if (q <= 0) throw std::domain_error("log2 of non-positive rational");
  return log2_int(q.get_num()) - log2_int(q.get_den());
}

std::string rat_str(const Rat& q);

}  // namespace lml
