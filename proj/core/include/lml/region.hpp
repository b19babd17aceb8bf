#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lml/composite.hpp"
#include "lml/rational.hpp"

namespace lml {

// Whether the vertical edge at u = delta belongs to the domain.
enum class DomainKind { closed, half_open };

// A claimed finite-norm region in the (u, w) = (1/q, 1/r) unit square:
// everything at u >= delta (strictly, for a half-open domain) lying on or
// under a concave, non-decreasing, piecewise-linear profile F that stays at
// or below the diagonal. On a closed domain the edge value at u = delta may
// drop below the profile limit F(delta); `jump` carries that smaller value.
struct RegionSpec {
  Rat delta;
  DomainKind kind = DomainKind::closed;
  std::vector<std::pair<Rat, Rat>> breakpoints;  // (u, F(u)), increasing u
  std::optional<Rat> jump;                       // edge value at u = delta
};

// Throws std::invalid_argument naming the first violated constraint.
void check_region(const RegionSpec& spec);

// Piecewise-linear interpolation of the profile at u in [delta, 1],
// ignoring any jump.
Rat region_value(const RegionSpec& spec, const Rat& u);
// Boundary height over u: the jump value at u = delta when present,
// the profile value otherwise.
Rat region_graph_value(const RegionSpec& spec, const Rat& u);

// Membership in the closed hull {delta <= u <= 1, 0 <= w <= F(u)}. The jump
// is ignored: edge points above the jump but under the profile limit count
// as inside. Certificates against such points come from the edge ladders,
// not from hull separation.
bool hull_contains(const RegionSpec& spec, const Rat& u, const Rat& w);

// The two boundary conventions a scan can target: `closed_graph` claims
// boundedness on the graph itself (jump included), `open_graph` claims it
// only strictly below the graph.
enum class ScanVariant { closed_graph, open_graph };

// Membership in the claimed region under the given convention.
bool claimed_bounded(const RegionSpec& spec, ScanVariant variant, const Rat& u,
                     const Rat& w);

// A ladder whose divergence half-plane {s >= gamma - width} contains the
// point (pu, pw) while the whole hull stays at or below gamma - 3 * width,
// so the ladder certifies unboundedness at the point without disturbing any
// hull cell. The line direction is chosen among the profile's segment
// slopes and a dyadic sweep of shallow and steep lines by largest squared
// margin per unit length; the margin is then split exactly, eps =
// (gamma - peak) / (3 * (a^2 + b^2)). Throws when the point admits no such
// line: inside the hull, on its boundary, or outside the unit square.
LadderParams separating_line(const RegionSpec& spec, const Rat& pu,
                             const Rat& pw, const Rat& p = rat(2));

// All fully reduced rational points (u, w) in the unit square with
// denominators at most cap that lie outside the hull, in increasing
// lexicographic order (u first, then w).
std::vector<std::pair<Rat, Rat>> enumerate_outside(const RegionSpec& spec,
                                                   long cap);

// One band of a finite subcover: a ladder whose band regime covers the part
// of the graph over the E-interval around the anchor abscissa u.
struct CoverEntry {
  Rat u;  // anchor abscissa, the left end for the leading band
  LadderParams ladder;
};

// Finitely many ladders, each matched to a profile segment's slope (or
// steepened for flat stretches), whose band intervals chain across the whole
// domain [delta, 1]. Level n sets ratio R = n^n and margin eps = 1/n, so the
// bands tighten toward the graph as the level grows while every graph point
// keeps band-regime growth in some entry.
std::vector<CoverEntry> finite_subcover(const RegionSpec& spec, long level,
                                        const Rat& p = rat(2));

enum class CellClass { bounded, unbounded, unknown };
// `model` means the verdict rests on the exact ladder models alone;
// `computed` means a seeded norm estimate on a materialized low rung agreed
// with the model magnitude within a factor of 32, corroborating the cell.
enum class Provenance { model, computed };

struct RegionCell {
  CellClass cls = CellClass::unknown;
  Provenance prov = Provenance::model;
  long depth = 0;  // truncation depth at which the verdict settled
};

// Lattice verdicts over the unit square: cell (i, j) sits at (i/g, j/g),
// stored u-major.
struct RegionMap {
  RegionSpec spec;
  ScanVariant variant = ScanVariant::closed_graph;
  long grid = 0;
  std::vector<long> depths;
  double blowup_log2 = 0.0;  // growth bar for the divergence heuristic
  std::vector<RegionCell> cells;

  const RegionCell& at(long i, long j) const {
    return cells[static_cast<size_t>(i * (grid + 1) + j)];
  }
};

// Classify every lattice point against an assembled family of certificates:
// separating lines for hull-outside points, edge ladders for the jump or the
// missing edge, and (for open_graph) subcover bands that sharpen with depth.
// A cell is unbounded when some active ladder's model diverges exactly at
// the cell's slope, or when the certified truncated magnitudes grow strictly
// across the depths and clear blowup_log2 at the last one; it is bounded
// when the deep ladders all sit in their flat regime and the magnitudes have
// stopped moving. Anything else stays unknown. Graph cells are reported
// unknown under closed_graph (the scan cannot decide tightness on the graph
// from below) and are classified like any other cell under open_graph.
RegionMap scan(const RegionSpec& spec, ScanVariant variant, long grid,
               const std::vector<long>& depths, const Rat& p = rat(2));

struct AxiomViolation {
  std::string axiom;  // "monotonicity", "diagonal", or "midpoint"
  Rat u, w;           // the offending cell
  std::string detail;
};

// Structural consistency of a verdict map, independent of the profile:
// a bounded cell forbids unbounded cells to its lower right (larger u,
// smaller w), a bounded cell must sit at or below the diagonal, and the
// lattice midpoint of two bounded cells must not be unbounded.
std::vector<AxiomViolation> axioms_check(const RegionMap& map);

enum class ArtifactFormat { csv, svg, json };

// Serialize a map byte-deterministically: CSV rows in storage order, an SVG
// plot of the lattice with the profile overlaid, or a JSON document carrying
// the spec and every cell (rationals as strings).
std::string emit(const RegionMap& map, ArtifactFormat format);

}  // namespace lml
