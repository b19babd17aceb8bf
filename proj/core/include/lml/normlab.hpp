#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lml/lorentz.hpp"
#include "lml/maximal.hpp"
#include "lml/testspace.hpp"

namespace lml {

// Estimate of the best constant C in ||Mf||_{p,r} <= C ||f||_{p,q}. Only
// lower bounds are certified: `lower` is realized by the named witness and
// replaying that witness reproduces it, while `ascent` is the best ratio the
// seeded search visited (>= lower, reproducible by rerunning with `seed`).
// `model` carries the constant-free scaled-family magnitude when the caller
// knows the space's parameters; it is a magnitude, not a bound.
struct NormEstimate {
  Scalar lower;
  Scalar ascent;
  std::optional<Scalar> model;
  std::string witness;
  std::uint64_t seed = 0;
};

// Witness suite followed by multiplicative coordinate ascent: starting from
// the best witness, each step picks one class value and one factor from
// {1/2, 2, 9/8, 7/8} (seeded), keeping the change when the ratio improves.
// Zero coordinates stay zero, so the search moves within the witness's
// support. Ascent never revisits a worse state, hence a longer budget with
// the same seed never lowers the result.
NormEstimate estimate(const ClassSpace& cs, const Rat& p, const ExtRat& q,
                      const ExtRat& r, long budget, std::uint64_t seed = 1);

// Same procedure on an arbitrary finite space, with per-point coordinates.
// The witness pool is the whole-space indicator plus every single-point
// indicator; witness ids are "all" and the point labels.
NormEstimate estimate(const Space& sp, const Rat& p, const ExtRat& q,
                      const ExtRat& r, long budget, std::uint64_t seed = 1);

// Replay a witness id produced by either overload.
Scalar replay_witness(const ClassSpace& cs, const Rat& p, const ExtRat& q,
                      const ExtRat& r, const std::string& id);
Scalar replay_witness(const Space& sp, const Rat& p, const ExtRat& q,
                      const ExtRat& r, const std::string& id);

// One scaled family member per kappa: estimate divided by the constant-free
// model magnitude 1 + lambda kappa^{a/r-b/q}. The unknown absolute constant
// cancels in the spread max/min, which is the quantity the scaling law
// pins down.
struct ScalingPoint {
  long kappa = 1;
  NormEstimate est;
  Scalar ratio;
};
struct ScalingProbe {
  std::vector<ScalingPoint> points;
  Scalar spread;
};
ScalingProbe scaling_probe(const Rat& p, const ExtRat& q, const ExtRat& r,
                           const Rat& lambda, long a, long b,
                           const std::vector<long>& kappas, long budget = 300,
                           std::uint64_t seed = 1);

// Atoms of measure 2^1 .. 2^n_max at pairwise distance 2: each atom
// outweighs all earlier ones together, the shape the divergence probe needs.
Space stack_space(long n_max);

// Divergence probe for r < q: g_{n0} = sum_{n<=n0} n^{-2/(q+r)} mu_n^{-1/p}
// chi_{E_n} over disjoint atoms E_n picked greedily so that each dominates
// the union of its predecessors. The (p,r) norm of g_{n0} grows like
// n0^{(q-r)/(r(q+r))} while the (p,q) norm stays bounded, so the ratio's
// log-log slope across n0 certifies the blow-up; at q = r the slope
// collapses to zero and the probe doubles as a negative control.
struct R1Point {
  long n0 = 0;
  Scalar ratio;
};
struct R1Probe {
  std::vector<R1Point> points;
  double growth = 0.0;
  double predicted = 0.0;
};
R1Probe r1_probe(const Space& sp, const Rat& p, const Rat& q, const Rat& r,
                 const std::vector<long>& n0s);

// Independent estimates over (q, r) cells, run concurrently; the cell seed
// mixes the cell index into the global seed, so results do not depend on
// scheduling and match a serial run cell by cell.
struct GridCell {
  ExtRat q;
  ExtRat r;
};
std::vector<NormEstimate> grid_estimate(const ClassSpace& cs, const Rat& p,
                                        const std::vector<GridCell>& cells,
                                        long budget, std::uint64_t seed = 1);

// CSV emission: "p,q,r,space-id,lower,ascent,model,seed,witness-id". The
// model column is empty when absent.
std::string csv_header();
std::string csv_row(const Rat& p, const ExtRat& q, const ExtRat& r,
                    const std::string& space_id, const NormEstimate& est);

}  // namespace lml
