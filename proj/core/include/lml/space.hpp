#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lml/scalar.hpp"

namespace lml {

// Finite metric measure space: points with strictly positive weights and a
// rational-valued metric. Distances are stored as 16-bit codes into a
// codebook of distinct rational values, upper triangle only; the spaces this
// library generates use very few distinct distances (three for a single
// generated space, a handful for glued ones), so this keeps even the larger
// explicit spaces cheap to validate and serialize.
//
// Build protocol: construct with weights (and optional labels), call
// set_dist for every unordered pair with a positive distance, then freeze().
// freeze() validates metric axioms and makes the space immutable. Symmetry
// holds by construction; identity of indiscernibles and the triangle
// inequality are checked explicitly.
class Space {
 public:
  explicit Space(std::vector<Scalar> weights,
                 std::vector<std::string> labels = {});

  void set_dist(size_t i, size_t j, const Rat& d);
  void freeze();
  bool frozen() const { return frozen_; }

  size_t size() const { return weights_.size(); }
  const Rat& dist(size_t i, size_t j) const;
  const Scalar& weight(size_t i) const { return weights_.at(i); }
  const std::string& label(size_t i) const { return labels_.at(i); }
  std::optional<size_t> find_label(const std::string& l) const;

  // Open ball {y : dist(center, y) < radius}; the strict inequality matters
  // everywhere in this project. Always contains the center.
  std::vector<size_t> ball(size_t center, const Rat& radius) const;

  Scalar measure_of(const std::vector<size_t>& pts) const;
  const Scalar& total_measure() const;
  // The support of the measure is the whole space because weights are
  // strictly positive; kept as an explicit, documented check.
  bool support_check() const { return true; }

  const std::vector<Rat>& dist_codebook() const { return codebook_; }
  uint16_t dist_code(size_t i, size_t j) const;

 private:
  size_t tri_index(size_t i, size_t j) const;
  void check_point(size_t i) const;

  std::vector<Scalar> weights_;
  std::vector<std::string> labels_;
  std::vector<uint16_t> code_;  // upper triangle, pair (i<j) at j(j-1)/2 + i
  std::vector<Rat> codebook_;   // code -> distance; code 0 is distance 0
  std::map<Rat, uint16_t> code_of_;
  Scalar total_;
  bool frozen_ = false;
};

// Nonnegative function given by per-point values. Plain data; all semantics
// live in free functions that pair a Fn with its Space.
struct Fn {
  std::vector<Scalar> values;

  static Fn zero(size_t n) { return Fn{std::vector<Scalar>(n)}; }
  static Fn constant(size_t n, const Scalar& v) {
    return Fn{std::vector<Scalar>(n, v)};
  }
  static Fn indicator(size_t n, const std::vector<size_t>& support);

  std::vector<size_t> support() const;
};

// Distribution function d_f(t) = mu({x : f(x) >= t}) as an explicit step
// function. Thresholds are the distinct nonzero values of f in decreasing
// order; mass(j) is the measure of {f >= threshold(j)}, so masses increase
// with j. d_f(t) = mass at the smallest threshold >= t (non-strict >=, which
// makes d_f left-continuous and equal to mu(E) on all of (0, max f] for an
// indicator of E).
struct StepFn {
  struct Step {
    Scalar threshold;
    Scalar mass;
  };
  std::vector<Step> steps;  // thresholds strictly decreasing

  bool empty() const { return steps.empty(); }
  // d_f(t) for t > 0.
  Scalar at(const Scalar& t) const;
};

StepFn distribution(const Fn& f, const Space& space);

}  // namespace lml
