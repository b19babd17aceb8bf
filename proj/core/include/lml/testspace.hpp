#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lml/logexp.hpp"
#include "lml/lorentz.hpp"
#include "lml/space.hpp"

namespace lml {

// Parameter sequences for the generated two-layer spaces. A valid set
// satisfies, with indices 1-based as in the comments but stored 0-based:
//   (i)   h_N / h_i is an integer for every i;
//   (ii)  m_{i+1} >= 2 m_i h_i;
//   (iii) 1 <= m_i^{1-p} h_i < 2;
//   (iv)  alpha_1 >= 2 m_N h_N;
//   (v)   alpha_{k+1} >= 2 alpha_k L beta_k h_N;
//   (vi)  1 <= alpha_k^{1-p} beta_k h_N < 2.
// Values grow doubly exponentially, so there are two storage tiers: the
// exact tier keeps literal integers (up to a configured bit bound), the log
// tier keeps base-2 exponents and restricts every value to a power of two.
struct SequenceSet {
  Rat p;
  long N = 0;
  long M = 0;
  long L = 1;
  bool log_tier = false;

  std::vector<Int> m, h, alpha, beta;      // exact tier, literal values
  std::vector<Int> em, eh, ealpha, ebeta;  // log tier, exponents of two

  LogExp m_val(size_t i) const;
  LogExp h_val(size_t i) const;
  LogExp alpha_val(size_t k) const;
  LogExp beta_val(size_t k) const;
  LogExp h_last() const;
};

// Throws std::invalid_argument naming the first violated constraint. All
// comparisons are exact in both tiers (integer power comparisons in the
// exact tier, rational exponent arithmetic in the log tier).
void check_sequences(const SequenceSet& s);

// Greedy constructor: m_1 = 1; h_i is the unique power of 2 in
// [m_i^{p-1}, 2 m_i^{p-1}); m_{i+1} = 2 m_i h_i; alpha_1 = 2 m_N h_N;
// beta_k is the smallest integer in [alpha_k^{p-1}/h_N, 2 alpha_k^{p-1}/h_N)
// (a window of ratio 2 at least 1 long, so never empty); alpha_{k+1} =
// 2 alpha_k L beta_k h_N. When any value would exceed `max_bits` bits the
// whole set is regenerated in the log tier, where beta and the L factor are
// rounded up to powers of two (the constraints still hold exactly).
SequenceSet generate_sequences(const Rat& p, long N, long M, long L,
                               size_t max_bits = 4096);

// A sequence set plus the halo weight multiplier K >= 1.
struct TestSpaceParams {
  SequenceSet seq;
  Scalar K = Scalar::one();
};

// Symmetry-reduced view of a generated space: N ground classes (class i has
// h_i points of weight m_i) and M halo classes (class k has L beta_k h_N
// points of weight K alpha_k). Every halo point is at distance 1 from
// exactly one point of each ground class (its anchor) and at distance 2
// from everything else. Construction validates the sequence constraints and
// the weight dominance chains that the operator analysis relies on: each
// halo point outweighs the whole ground layer, each ground point outweighs
// the union of the earlier ground classes, and each halo point outweighs
// the union of the earlier halo classes.
class ClassSpace {
 public:
  explicit ClassSpace(TestSpaceParams params);

  const TestSpaceParams& params() const { return params_; }
  const SequenceSet& seq() const { return params_.seq; }
  const Scalar& K() const { return params_.K; }
  long n_ground() const { return params_.seq.N; }
  long n_halo() const { return params_.seq.M; }

  const LogExp& ground_weight(size_t i) const { return gw_.at(i); }
  const LogExp& ground_count(size_t i) const { return gc_.at(i); }
  const LogExp& ground_mass(size_t i) const { return gm_.at(i); }
  const LogExp& halo_weight(size_t k) const { return hw_.at(k); }
  const LogExp& halo_count(size_t k) const { return hc_.at(k); }
  const LogExp& halo_mass(size_t k) const { return hm_.at(k); }
  const LogExp& ground_total() const { return ground_total_; }
  const LogExp& total_mass() const { return total_; }

  // L beta_k h_N / h_i: how many points of halo class k anchor to one fixed
  // ground point of class i. An integer by constraint (i).
  LogExp anchors_per_ground(size_t i, size_t k) const;

 private:
  TestSpaceParams params_;
  std::vector<LogExp> gw_, gc_, gm_, hw_, hc_, hm_;
  LogExp ground_total_, total_;
};

// Class-constant function: one value per ground class, one per halo class.
struct ClassFn {
  std::vector<LogExp> ground;
  std::vector<LogExp> halo;

  static ClassFn zero(const ClassSpace& cs);
  static ClassFn indicator_ground(const ClassSpace& cs, size_t i);
  static ClassFn indicator_halo(const ClassSpace& cs, size_t k);
  static ClassFn whole(const ClassSpace& cs);
};

void check_shape(const ClassFn& f, const ClassSpace& cs);

// Distribution steps (threshold, cumulative mass), thresholds decreasing.
std::vector<std::pair<LogExp, LogExp>> class_distribution(const ClassFn& f,
                                                          const ClassSpace& cs);
LogExp class_lorentz_norm(const ClassFn& f, const ClassSpace& cs, const Rat& p,
                          const ExtRat& q);
LogExp class_l1(const ClassFn& f, const ClassSpace& cs);
// Constant function with value ||f||_1 / mu(S).
LogExp class_avg(const ClassFn& f, const ClassSpace& cs);
ClassFn class_add(const ClassFn& a, const ClassFn& b);
ClassFn class_scale(const ClassFn& f, const LogExp& c);

// Anchor index: the unique ground point of class i at distance 1 from halo
// point l of class k. Indices l and the result j are 1-based here because
// the defining interval partition is; the explicit tier converts.
// j = ceil(l * h_i / (L beta_k h_N)), 1 <= l <= L beta_k h_N.
Int gamma(const ClassSpace& cs, size_t i, size_t k, const Int& l);

// The single-pair averaging operator: (A_ki f)(x) = f(anchor_i(x)) *
// weight(anchor) / weight(x) on halo class k, zero elsewhere.
ClassFn op_A_ki(const ClassSpace& cs, size_t k, size_t i, const ClassFn& f);
// Sum of op_A_ki over i on every halo class.
ClassFn op_A(const ClassSpace& cs, const ClassFn& f);
// Ground-layer constant max of f over the halo, zero on the halo.
ClassFn op_Mtilde(const ClassSpace& cs, const ClassFn& f);

// Exact norm-transfer factor of op_A_ki between Lorentz norms with first
// index p: ||A_ki f||_{p,r} = factor * ||f||_{p,r} for f supported in
// ground class i. Equals K^{-1+1/p} L^{1/p} times transfer_bracket.
LogExp transfer_factor(const ClassSpace& cs, size_t i, size_t k, const Rat& p);
// m_i^{1-1/p} h_i^{-1/p} alpha_k^{-1+1/p} beta_k^{1/p} h_N^{1/p}. By (iii)
// the first pair lies in (2^{-1/p}, 1] and by (vi) the second triple lies in
// [1, 2^{1/p}), so the product is pinned to (2^{-1/p}, 2^{1/p}).
LogExp transfer_bracket(const ClassSpace& cs, size_t i, size_t k, const Rat& p);

// Explicit realization: every point materialized, weights and the {0,1,2}
// metric filled in. Ground points first (class by class), then halo points.
// Labels are "x<i>,<j>" and "o<k>,<l>" with 1-based indices.
struct ExplicitTestSpace {
  TestSpaceParams params;
  Space space;
  std::vector<size_t> ground_off, halo_off;
  std::vector<long> ground_cnt, halo_cnt;

  size_t ground_point(size_t i, long j) const;
  size_t halo_point(size_t k, long l) const;
  // 0-based anchor index j of halo point (k, l) in ground class i.
  long anchor_of(size_t k, long l, size_t i) const;

  Fn class_to_fn(const ClassFn& f) const;
  Fn indicator_ground(size_t i) const;
};

// Throws std::length_error beyond `max_points` (the class tier has no such
// limit and is the default engine) and std::domain_error for log-tier
// sequences, whose point counts are astronomically past any cap.
ExplicitTestSpace build_explicit(const TestSpaceParams& params,
                                 size_t max_points = 10000);

Fn op_A_ki(const ExplicitTestSpace& ts, size_t k, size_t i, const Fn& f);
Fn op_A(const ExplicitTestSpace& ts, const Fn& f);
Fn op_Mtilde(const ExplicitTestSpace& ts, const Fn& f);

// Named witness functions: the layered ground function
// sum_i (h_i m_i)^{-1/p} chi_{S_i} plus the indicators of every run of
// consecutive classes in the (ground..., halo...) order, singletons and the
// whole space included.
struct Witness {
  std::string name;
  ClassFn fn;
};
std::vector<Witness> witness_functions(const ClassSpace& cs, const Rat& p);

// Ratios ||M w||_{p,r} / ||w||_{p,q} for every witness, computed at the
// class tier. The maximum is a certified lower bound for the maximal
// operator's (p,q) -> (p,r) norm on this space. Evaluable for q > r too;
// those ratios feed the complement-region diagnostics.
struct WitnessRatio {
  std::string name;
  LogExp ratio;
};
std::vector<WitnessRatio> witness_suite(const ClassSpace& cs, const Rat& p,
                                        const ExtRat& q, const ExtRat& r);

// Parameters of the scaled family: N = kappa^b, M = kappa^a, L the smallest
// positive integer with L >= (lambda kappa^{-b})^p and
// K = L^{1/(p-1)} (lambda kappa^{-b})^{-p/(p-1)}, which solves
// K^{-1+1/p} L^{1/p} = lambda kappa^{-b} with K >= 1. L_override (when
// nonzero) replaces the minimal L; it must still keep K >= 1.
TestSpaceParams scaled_family_params(const Rat& p, const Rat& lambda, long a,
                                     long b, long kappa, long L_override = 0);

// The model magnitude 1 + lambda kappa^{a/r - b/q} that the scaled family's
// norm tracks up to a universal constant (which cancels in all ratio-based
// uses and is not included).
Scalar model_norm(const Rat& p, const ExtRat& q, const ExtRat& r,
                  const Rat& lambda, long a, long b, long kappa);

}  // namespace lml
