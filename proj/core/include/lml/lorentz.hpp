#pragma once

#include <functional>
#include <random>

#include "lml/space.hpp"

namespace lml {

// Second Lorentz index: a rational in [1, inf), or +infinity.
struct ExtRat {
  Rat value;
  bool infinite = false;

  ExtRat() : value(0) {}
  ExtRat(const Rat& v) : value(v) {}  // NOLINT: implicit by design
  ExtRat(long v) : value(v) {}        // NOLINT
  static ExtRat inf() {
    ExtRat e;
    e.infinite = true;
    return e;
  }

  bool operator==(const ExtRat& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return value == o.value;
  }
  // Order with +infinity on top.
  bool operator<=(const ExtRat& o) const {
    if (infinite) return o.infinite;
    return o.infinite || value <= o.value;
  }
  std::string str() const { return infinite ? "inf" : rat_str(value); }
};

// Accepts "inf" (any case) on top of what parse_rat handles.
ExtRat parse_ext(const std::string& text);

void require_p(const Rat& p);         // throws unless p > 1
void require_index(const ExtRat& q);  // throws unless q >= 1 or infinite

// Lorentz quasi-norm via the distribution function:
//   q < inf:  ( (p/q) * sum_j d_j^{q/p} (t_j^q - t_{j+1}^q) )^{1/q}
//   q = inf:  max_j t_j d_j^{1/p}
// The sum form is the exact closed form of p^{1/q} (int (t d(t)^{1/p})^q
// dt/t)^{1/q} for step functions; nothing is ever integrated numerically.
//
// The template runs the formula over any number type with the Scalar
// arithmetic subset (LogExp being the other instantiation); steps are
// (threshold, cumulative mass) pairs with thresholds strictly decreasing.
template <typename Num>
Num lorentz_norm_steps(const std::vector<std::pair<Num, Num>>& steps,
                       const Rat& p, const ExtRat& q) {
  require_p(p);
  require_index(q);
  if (steps.empty()) return Num::zero();

  if (q.infinite) {
    Num best = Num::zero();
    for (const auto& [t, mass] : steps) {
      Num cand = t.mul(mass.pow(1 / p));
      if (cand.cmp(best) > 0) best = cand;
    }
    return best;
  }

  const Rat& qv = q.value;
  Rat q_over_p = qv / p;
  Num sum = Num::zero();
  for (size_t j = 0; j < steps.size(); ++j) {
    Num tq = steps[j].first.pow(qv);
    Num tq_next =
        j + 1 < steps.size() ? steps[j + 1].first.pow(qv) : Num::zero();
    sum = sum.add(steps[j].second.pow(q_over_p).mul(tq.sub(tq_next)));
  }
  return sum.mul_rat(p / qv).pow(1 / qv);
}

Scalar lorentz_norm(const StepFn& d, const Rat& p, const ExtRat& q);
Scalar lorentz_norm(const Fn& f, const Space& space, const Rat& p,
                    const ExtRat& q);

// Classical p-norm (sum f^p dmu)^{1/p}; equals lorentz_norm at q = p and is
// kept separate as an independent oracle for that identity.
Scalar lebesgue_norm(const Fn& f, const Space& space, const Rat& p);

Scalar l1_norm(const Fn& f, const Space& space);

// Constant function with value ||f||_1 / mu(X).
Fn avg_fn(const Fn& f, const Space& space);

Fn fn_add(const Fn& a, const Fn& b);
Fn fn_scale(const Fn& f, const Scalar& c);

// True iff for every n >= 2 the top plateau mass of d_{f_n} is at least the
// measure of the union of the earlier supports (then every plateau is).
// Throws if supports overlap.
bool stacking_check(const std::vector<Fn>& fs, const Space& space);

struct BlockRatio {
  Scalar ratio;    // ||sum f_n|| / ell-q aggregate of the ||f_n||
  Scalar inverse;  // its reciprocal
};

// For families passing stacking_check the ratio provably stays inside
// [1/block_bound, block_bound]; the tests brute-verify that envelope.
BlockRatio block_comparability(const std::vector<Fn>& fs, const Space& space,
                               const Rat& p, const ExtRat& q);

// 2^{1/p} (1 - 2^{-q/p})^{-1/q}, the envelope constant above (2^{1/p} when
// q = inf). Comes from the geometric decay of plateau masses that the
// stacking condition forces.
Scalar block_bound(const Rat& p, const ExtRat& q);

struct ProbeConstants {
  Scalar c_triangle;   // sup ||sum f_n|| / sum ||f_n||
  Scalar c_average;    // sup ||avg f|| / ||f||
  Scalar c_embedding;  // sup ||f||_{p,r} / ||f||_{p,q}, needs q <= r
};

// Randomized diagnostics for the three comparison constants; observed
// suprema over `trials` sampled spaces, not certificates.
ProbeConstants empirical_constant_probes(
    const std::function<Space(std::mt19937_64&)>& sampler, const Rat& p,
    const ExtRat& q, const ExtRat& r, int trials, uint64_t seed);

}  // namespace lml
