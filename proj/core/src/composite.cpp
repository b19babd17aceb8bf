#include "lml/composite.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace lml {

namespace {

Int square(const Int& x) { return x * x; }

// sqrt(D) with ~1e-15 relative accuracy, safe far beyond double range.
double sqrt_int(const Int& D) {
  if (D == 0) return 0.0;
  return std::exp2(0.5 * log2_int(D));
}

}  // namespace

Quad::Quad(const Rat& u_, const Rat& v_, const Int& D_) : u(u_), v(v_), D(D_) {
  if (D < 0) throw std::invalid_argument("negative radicand");
  if (v == 0) {
    D = 0;
    return;
  }
  if (mpz_perfect_square_p(D.get_mpz_t())) {
    Int root;
    mpz_sqrt(root.get_mpz_t(), D.get_mpz_t());
    u += v * Rat(root);
    v = 0;
    D = 0;
  }
}

Quad Quad::add(const Quad& o) const {
  if (v == 0) return Quad(u + o.u, o.v, o.D);
  if (o.v == 0) return Quad(u + o.u, v, D);
  if (D != o.D) throw std::logic_error("cannot combine different radicands");
  return Quad(u + o.u, v + o.v, D);
}

Quad Quad::sub(const Quad& o) const { return add(o.scale(-1)); }

Quad Quad::scale(const Rat& c) const {
  if (c == 0) return Quad();
  return Quad(u * c, v * c, D);
}

int Quad::sign() const {
  // Canonical form: v != 0 implies D is not a perfect square, so u + v*sqrt(D)
  // vanishes only when both parts do and mixed signs resolve by squaring.
  if (v == 0) return u == 0 ? 0 : (u > 0 ? 1 : -1);
  if (u == 0) return v > 0 ? 1 : -1;
  if (u > 0 && v > 0) return 1;
  if (u < 0 && v < 0) return -1;
  Rat lhs = u * u;
  Rat rhs = v * v * Rat(D);
  int big = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
  if (u > 0) return big;  // v < 0: sign follows the larger square
  return -big;            // u < 0, v > 0
}

double Quad::to_double() const {
  return lml::to_double(u) + lml::to_double(v) * sqrt_int(D);
}

std::string Quad::str() const {
  if (v == 0) return rat_str(u);
  std::string root = "sqrt(" + D.get_str() + ")";
  std::string tail =
      (v == 1 ? root : (v == -1 ? "-" + root : rat_str(v) + "*" + root));
  if (u == 0) return tail;
  if (v > 0) return rat_str(u) + " + " + tail;
  return rat_str(u) + " - " + (v == -1 ? root : rat_str(-v) + "*" + root);
}

LadderParams make_ladder(const Rat& p, const Rat& gamma, long a, long b,
                         const Int& R, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("margin eps must be positive");
  Int D = square(Int(a)) + square(Int(b));
  LadderParams lp{p, Quad(gamma), a, b, R, Quad(0, eps, D)};
  check_ladder(lp);
  return lp;
}

void check_ladder(const LadderParams& lp) {
  if (lp.p <= 1) throw std::invalid_argument("p must exceed 1");
  if (lp.a < 1 || lp.b < 1)
    throw std::invalid_argument("direction components must be positive");
  if (lp.R < 1) throw std::invalid_argument("ratio R must be at least 1");
  if (lp.width.sign() <= 0)
    throw std::invalid_argument("band width must be positive");
}

std::vector<Rung> ladder_rungs(const LadderParams& lp, long n_max) {
  check_ladder(lp);
  if (n_max < 1) throw std::invalid_argument("need at least one rung");
  std::vector<Rung> rungs;
  rungs.reserve(static_cast<size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    Rung rung;
    rung.n = n;
    rung.R = lp.R;
    rung.kappa = pow_int(lp.R, static_cast<unsigned long>(n));
    rung.lambda_exp = lp.gamma.scale(-n) + lp.width.scale(n + 2);
    rungs.push_back(rung);
  }
  return rungs;
}

double rung_lambda_log2(const Rung& rung) {
  if (rung.R == 1) return 0.0;
  return rung.lambda_exp.to_double() * log2_int(rung.R);
}

std::optional<Scalar> rung_lambda_exact(const Rung& rung) {
  if (rung.R == 1) return Scalar::one();
  if (!rung.lambda_exp.is_rational()) return std::nullopt;
  return Scalar::rat_pow(Rat(rung.R), rung.lambda_exp.u);
}

TestSpaceParams rung_space_params(const LadderParams& lp, const Rung& rung,
                                  long L_override) {
  if (!rung.kappa.fits_slong_p())
    throw std::domain_error("rung kappa exceeds long range");
  Rat lambda;
  auto exact = rung_lambda_exact(rung);
  if (exact && exact->is_rational()) {
    lambda = exact->as_rat();
  } else {
    // Irrational lambda; the nearest power of two preserves the model value
    // within a factor sqrt(2), which every downstream use absorbs.
    lambda = pow_rat(Rat(2), std::lround(rung_lambda_log2(rung)));
  }
  return scaled_family_params(lp.p, lambda, lp.a, lp.b, rung.kappa.get_si(),
                              L_override);
}

Rat slope_value(long a, long b, const ExtRat& q, const ExtRat& r) {
  if ((!q.infinite && q.value < 1) || (!r.infinite && r.value < 1))
    throw std::invalid_argument("indices must be at least 1");
  Rat s = 0;
  if (!r.infinite) s += Rat(a) / r.value;
  if (!q.infinite) s -= Rat(b) / q.value;
  return s;
}

Regime slope_regime(const LadderParams& lp, const Quad& s) {
  Quad diff = s - lp.gamma;
  if (diff.sign() == 0) return Regime::divergent;
  if ((diff + lp.width.scale(2)).sign() > 0 && (diff + lp.width).sign() < 0)
    return Regime::band;
  if ((diff + lp.width.scale(3)).sign() <= 0) return Regime::bounded;
  return Regime::unspecified;
}

Regime model_regime(const LadderParams& lp, const ExtRat& q, const ExtRat& r) {
  if (!(q <= r)) throw std::invalid_argument("model needs q <= r");
  return slope_regime(lp, Quad(slope_value(lp.a, lp.b, q, r)));
}

bool slope_divergent(const LadderParams& lp, const Quad& s) {
  if (lp.R == 1) return false;
  return (s - lp.gamma + lp.width).sign() > 0;
}

bool ladder_divergent(const LadderParams& lp, const ExtRat& q,
                      const ExtRat& r) {
  if (!(q <= r)) throw std::invalid_argument("model needs q <= r");
  return slope_divergent(lp, Quad(slope_value(lp.a, lp.b, q, r)));
}

std::optional<Quad> slope_sup_exponent(const LadderParams& lp, const Quad& s) {
  if (lp.R == 1) return Quad();
  if (slope_divergent(lp, s)) return std::nullopt;
  return s - lp.gamma + lp.width.scale(3);
}

Quad rung_exponent(const LadderParams& lp, const Quad& s, long n) {
  return (s - lp.gamma).scale(n) + lp.width.scale(n + 2);
}

double trunc_sup_log2(const LadderParams& lp, const Quad& s, long n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("need at least one rung");
  double lgR = lp.R == 1 ? 0.0 : log2_int(lp.R);
  double best = rung_exponent(lp, s, 1).to_double() * lgR;
  for (long n = 2; n <= n_trunc; ++n)
    best = std::max(best, rung_exponent(lp, s, n).to_double() * lgR);
  double tail =
      std::log1p(std::exp2(-std::abs(best))) / std::numbers::ln2;
  return best > 0 ? best + tail : tail;
}

void check_threshold(const ThresholdParams& tp) {
  if (tp.p <= 1) throw std::invalid_argument("p must exceed 1");
  if (tp.delta < 0 || tp.delta > 1)
    throw std::invalid_argument("threshold delta must lie in [0, 1]");
  if (tp.omega < 0 || tp.omega > tp.delta)
    throw std::invalid_argument("edge omega must lie in [0, delta]");
}

std::vector<LadderParams> threshold_ladders(const ThresholdParams& tp,
                                            long n_max, WidthRule rule) {
  check_threshold(tp);
  if (n_max < 1 || n_max > 4096)
    throw std::invalid_argument("ladder count out of range");
  std::vector<LadderParams> ladders;
  ladders.reserve(static_cast<size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    Int nn(n);
    Int b_int = square(nn);
    Int D = square(nn) + square(b_int);  // n^2 + n^4, never a perfect square
    Quad width = rule == WidthRule::covering
                     ? Quad(Rat(n + 1, 2))
                     : Quad(0, Rat(1, 3 * n), D);
    Rat anchor = Rat(n) * tp.omega - Rat(b_int) * tp.delta;
    if (tp.rule == EdgeRule::open) anchor -= 1;
    LadderParams lp;
    lp.p = tp.p;
    lp.gamma = Quad(anchor) + width.scale(3);
    lp.a = n;
    lp.b = n * n;
    lp.R = pow_int(nn, static_cast<unsigned long>(n));
    lp.width = width;
    ladders.push_back(lp);
  }
  return ladders;
}

bool threshold_bounded(const ThresholdParams& tp, const Rat& u, const Rat& w) {
  if (u < 0 || u > 1 || w < 0 || w > 1)
    throw std::invalid_argument("coordinates must lie in the unit square");
  if (u > tp.delta) return w <= u;
  if (u == tp.delta)
    return tp.rule == EdgeRule::closed ? w <= tp.omega : w < tp.omega;
  return false;
}

Space combine(const std::vector<Space>& components, size_t n_trunc,
              size_t max_points) {
  if (n_trunc == 0 || n_trunc > components.size())
    throw std::invalid_argument("truncation must select between 1 and all components");
  size_t total = 0;
  for (size_t n = 0; n < n_trunc; ++n) {
    if (!components[n].frozen())
      throw std::logic_error("combine needs frozen components");
    total += components[n].size();
  }
  if (total > max_points)
    throw std::length_error("combined space exceeds the point cap");

  // Scale factors: smallest powers of two making each component's mass at
  // least 2^n times the (rescaled) mass of everything before it.
  std::vector<Scalar> scale(n_trunc, Scalar::one());
  Scalar running = components[0].total_measure();
  for (size_t n = 1; n < n_trunc; ++n) {
    Scalar bound = running.mul(Scalar::pow2(static_cast<long>(n) + 1));
    Scalar ratio = bound.div(components[n].total_measure());
    long k = static_cast<long>(std::ceil(ratio.log2()));
    while (Scalar::pow2(k).cmp(ratio) < 0) ++k;
    while (k > 0 && Scalar::pow2(k - 1).cmp(ratio) >= 0) --k;
    if (k < 0) k = 0;
    scale[n] = Scalar::pow2(k);
    running = running.add(scale[n].mul(components[n].total_measure()));
  }

  std::vector<Scalar> weights;
  std::vector<std::string> labels;
  weights.reserve(total);
  labels.reserve(total);
  std::vector<size_t> base(n_trunc);
  for (size_t n = 0; n < n_trunc; ++n) {
    base[n] = weights.size();
    const Space& comp = components[n];
    std::string prefix = std::to_string(n + 1) + ":";
    for (size_t i = 0; i < comp.size(); ++i) {
      weights.push_back(scale[n].mul(comp.weight(i)));
      labels.push_back(prefix + comp.label(i));
    }
  }

  Space glued(std::move(weights), std::move(labels));
  for (size_t n = 0; n < n_trunc; ++n) {
    const Space& comp = components[n];
    for (size_t j = 1; j < comp.size(); ++j)
      for (size_t i = 0; i < j; ++i)
        glued.set_dist(base[n] + i, base[n] + j, comp.dist(i, j));
  }
  for (size_t n = 0; n < n_trunc; ++n)
    for (size_t m = n + 1; m < n_trunc; ++m) {
      Rat cross = rat(static_cast<long>(2 + m + 1));  // 2 + max 1-based index
      for (size_t i = 0; i < components[n].size(); ++i)
        for (size_t j = 0; j < components[m].size(); ++j)
          glued.set_dist(base[n] + i, base[m] + j, cross);
    }
  glued.freeze();
  return glued;
}

}  // namespace lml
