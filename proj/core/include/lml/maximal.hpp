#pragma once

#include <vector>

#include "lml/space.hpp"
#include "lml/testspace.hpp"

namespace lml {

// Centered maximal operator M f(x) = sup over s > 0 of the mu-average of f
// on the open ball B(x, s). On a finite space the supremum is a maximum
// over one ball per distinct distance occurring at x ({x} itself first, the
// whole space last), so the result is exact whenever the inputs are.
//
// The evaluator form amortizes the per-center distance sort over many
// functions on the same space; maximal_fn is the one-shot wrapper.
class MaximalEvaluator {
 public:
  explicit MaximalEvaluator(const Space& space);

  Fn apply(const Fn& f) const;

 private:
  const Space& space_;
  // Point indices sorted by distance from each center, and the positions
  // where a new distance value starts (ball boundaries).
  std::vector<std::vector<uint32_t>> order_;
  std::vector<std::vector<uint32_t>> cut_;
};

Fn maximal_fn(const Fn& f, const Space& space);

// Class-tier maximal operator. The ball family around any point collapses
// to three cases: the point alone, the radius-(1,2] ball (the point plus
// its anchors or anchored halo points), and the whole space. Averages come
// out as closed forms in the class data:
//   ground class i:  max{ f_i,
//     (f_i m_i + sum_k c_ik f*_k K alpha_k) / (m_i + sum_k c_ik K alpha_k),
//     global average }        with c_ik = L beta_k h_N / h_i,
//   halo class k:    max{ f*_k,
//     (f*_k K alpha_k + sum_i f_i m_i) / (K alpha_k + sum_i m_i),
//     global average }.
ClassFn maximal_fn_classes(const ClassSpace& cs, const ClassFn& cf);

// Pointwise envelope of the maximal operator on a generated space:
//   A f <= 2 M f   and   M f <= max{2 f, 4 A f, 2 Mtilde f, f_avg},
// where A averages anchor values onto the halo, Mtilde spreads the halo
// maximum over the ground layer and f_avg is the global average. Both
// factor-2 slacks are genuinely needed: the mid-radius ball around a halo
// point mixes the point's own (heavy) value with its anchors, which dilutes
// A f when the point's value is small and beats every listed term by up to
// a factor 2 when it is large. Tests pin counterexamples to the tighter
// constants. `mf` is maximal_fn(f), passed in so bulk callers can reuse an
// evaluator. Comparisons carry 1e-12 relative slack for log-tier weights.
bool sandwich_check(const ExplicitTestSpace& ts, const Fn& f, const Fn& mf);

}  // namespace lml
