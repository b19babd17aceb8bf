#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lml/rational.hpp"
#include "lml/space.hpp"
#include "lml/testspace.hpp"

namespace lml {

// Exact value u + v*sqrt(D) for an integer radicand D >= 0. Signs and
// comparisons are decided by squaring, never by floating point, so boundary
// cases (including perfect-square D) resolve exactly. Values from different
// radicands cannot be mixed unless one side is purely rational.
struct Quad {
  Rat u;  // rational part
  Rat v;  // coefficient of sqrt(D)
  Int D;  // radicand

  Quad() : D(0) {}
  Quad(const Rat& rational) : u(rational), D(0) {}  // NOLINT: implicit
  Quad(long rational) : u(rational), D(0) {}        // NOLINT
  Quad(const Rat& u_, const Rat& v_, const Int& D_);

  bool is_rational() const { return v == 0; }

  Quad add(const Quad& o) const;
  Quad sub(const Quad& o) const;
  Quad scale(const Rat& c) const;
  Quad negate() const { return scale(-1); }

  // -1, 0, or +1.
  int sign() const;
  int cmp(const Quad& o) const { return sub(o).sign(); }

  double to_double() const;
  std::string str() const;
};

inline Quad operator+(const Quad& a, const Quad& b) { return a.add(b); }
inline Quad operator-(const Quad& a, const Quad& b) { return a.sub(b); }
inline Quad operator*(const Rat& c, const Quad& a) { return a.scale(c); }
inline bool operator<(const Quad& a, const Quad& b) { return a.cmp(b) < 0; }
inline bool operator>(const Quad& a, const Quad& b) { return a.cmp(b) > 0; }
inline bool operator<=(const Quad& a, const Quad& b) { return a.cmp(b) <= 0; }
inline bool operator>=(const Quad& a, const Quad& b) { return a.cmp(b) >= 0; }
inline bool operator==(const Quad& a, const Quad& b) { return a.cmp(b) == 0; }
inline bool operator!=(const Quad& a, const Quad& b) { return a.cmp(b) != 0; }

// A geometric ladder of scaled families: rung n uses kappa = R^n and
// lambda = R^{-n*gamma + (n+2)*width}, so at exponent s = a/r - b/q the
// rung's model magnitude is 1 + R^{e_n} with e_n = n*(s - gamma) + (n+2)*
// width. The rungs concentrate along the line s = gamma in the (1/q, 1/r)
// plane: for s > gamma - width the exponents e_n grow without bound, at
// s = gamma - width they sit at the constant 2*width, and below that the
// first rung dominates with e_1 = s - gamma + 3*width.
//
// gamma and width may carry a sqrt(a^2 + b^2) component (threshold_ladders
// produces such values), hence the Quad fields. R == 1 collapses every rung
// to the flat model 1 + 1 regardless of the other parameters.
struct LadderParams {
  Rat p;
  Quad gamma;
  long a = 1;
  long b = 1;
  Int R;
  Quad width;  // band half-width, the eps * sqrt(a^2 + b^2) product
};

// width = eps * sqrt(a^2 + b^2) for a rational margin eps > 0.
LadderParams make_ladder(const Rat& p, const Rat& gamma, long a, long b,
                         const Int& R, const Rat& eps);
// Throws std::invalid_argument naming the offending field.
void check_ladder(const LadderParams& lp);

struct Rung {
  long n = 0;
  Int kappa;        // R^n
  Int R;
  Quad lambda_exp;  // lambda = R^lambda_exp, exact
};

std::vector<Rung> ladder_rungs(const LadderParams& lp, long n_max);

double rung_lambda_log2(const Rung& rung);
// Exact lambda when the exponent is rational and R^exponent lands in the
// explicit tier; nullopt otherwise.
std::optional<Scalar> rung_lambda_exact(const Rung& rung);
// Test-space parameters realizing the rung. lambda is taken exactly when
// possible and otherwise rounded to the nearest power of two; kappa must
// fit in a long. Only low rungs are materializable, the rest are model-only.
TestSpaceParams rung_space_params(const LadderParams& lp, const Rung& rung,
                                  long L_override = 0);

// a/r - b/q with 1/inf = 0.
Rat slope_value(long a, long b, const ExtRat& q, const ExtRat& r);

// The statement-level classification of a slope value against the ladder's
// line: on the line the model diverges, in the band (gamma - 2*width,
// gamma - width) it peaks between R^width and R^{2*width}, at or below
// gamma - 3*width every rung is flat. The two gaps in between carry no
// statement and map to `unspecified`.
enum class Regime { divergent, band, bounded, unspecified };

Regime slope_regime(const LadderParams& lp, const Quad& s);
// Validates q <= r, then classifies slope_value(a, b, q, r).
Regime model_regime(const LadderParams& lp, const ExtRat& q, const ExtRat& r);

// Whether sup over all rungs of the model is infinite: R > 1 and
// s > gamma - width (each successive rung then multiplies the bulk by
// R^{s - gamma + width} > 1).
bool slope_divergent(const LadderParams& lp, const Quad& s);
bool ladder_divergent(const LadderParams& lp, const ExtRat& q, const ExtRat& r);

// Base-R exponent of (sup_n model_n) - 1 when the sup is finite: that is
// s - gamma + 3*width, attained at the first rung. nullopt when infinite.
// Flat ladders (R == 1) report exponent zero.
std::optional<Quad> slope_sup_exponent(const LadderParams& lp, const Quad& s);

// e_n = n*(s - gamma) + (n + 2)*width, the base-R exponent of rung n's bulk.
Quad rung_exponent(const LadderParams& lp, const Quad& s, long n);

// log2 of max_{n <= n_trunc} (1 + R^{e_n}), in doubles. The growth of this
// value across increasing truncation depths is the divergence signal used
// by the region scanner.
double trunc_sup_log2(const LadderParams& lp, const Quad& s, long n_trunc);

// Parameters for a family of ladders whose combined finite-norm region is
// the triangle right of a vertical threshold plus part of its edge:
//   finite  iff  1/q > delta and r >= q,  or  1/q = delta and 1/r <= omega
// with `closed` edge rule, the last inequality strict with `open`.
enum class EdgeRule { closed, open };

struct ThresholdParams {
  Rat p;
  Rat delta;  // threshold in [0, 1] on the 1/q axis
  Rat omega;  // edge height in [0, delta] on the 1/r axis
  EdgeRule rule = EdgeRule::closed;
};

void check_threshold(const ThresholdParams& tp);

// Band width schedule for the generated ladders. `covering` gives rung n
// the width (n+1)/2, which keeps every rung's divergent half-plane strictly
// left of the threshold for all delta, omega; the target region is then cut
// out exactly (divergence right of the threshold would otherwise leak in
// whenever delta - omega > 2/3). `proportional` gives rung n the width
// d_n/(3n) (margin 1/(3n) times the direction length); it reproduces the
// historical parameterization and is kept for comparison runs.
enum class WidthRule { covering, proportional };

// Ladder n in 1..n_max: direction (a, b) = (n, n^2), ratio R = n^n (so the
// first ladder is flat), and gamma placing the edge anchor on the bounded
// boundary: n*omega - n^2*delta = gamma - 3*width for the closed rule,
// n*(omega - 1/n) - n^2*delta = gamma - 3*width for the open rule.
std::vector<LadderParams> threshold_ladders(const ThresholdParams& tp,
                                            long n_max,
                                            WidthRule rule = WidthRule::covering);

// The claimed finite-norm region at coordinates (u, w) = (1/q, 1/r).
bool threshold_bounded(const ThresholdParams& tp, const Rat& u, const Rat& w);

// Disjoint union of the first n_trunc components with inter-component
// distance 2 + max(n, m) for points in distinct components n and m
// (1-based), so balls of radius <= 2 never leave a component and a ball
// that does contains every component indexed <= radius - 2. Component
// measures are rescaled by the smallest powers of two c_n (c_1 = 1) with
//   c_n * mu_n(X_n) >= 2^n * sum_{j<n} c_j * mu_j(X_j),
// making each component outweigh everything before it. Labels are prefixed
// with "<n>:". Component diameters must stay small enough for the triangle
// inequality against the cross distances; freeze() enforces this. The cap
// is conservative because metric validation of a glued space is cubic in
// the point count.
Space combine(const std::vector<Space>& components, size_t n_trunc,
              size_t max_points = 800);

}  // namespace lml
