#include "lml/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lml/normlab.hpp"

namespace lml {

namespace {

// Largest integer at most x, found from a float guess and fixed up exactly.
Int floor_quad(const Quad& x) {
  Int k(std::floor(x.to_double()));
  while (Quad(Rat(k)) > x) k -= 1;
  Int next = k + 1;
  while (Quad(Rat(next)) <= x) {
    k = next;
    next += 1;
  }
  return k;
}

// The dyadic rational with the smallest power-of-two denominator lying
// strictly above lo and below hi (at most hi when closed_hi). The interval
// must be nonempty.
Rat dyadic_between(const Quad& lo, const Quad& hi, bool closed_hi) {
  for (unsigned long t = 1;; ++t) {
    Int den = pow_int(Int(2), t);
    Int num = floor_quad(lo.scale(Rat(den))) + 1;
    Rat cand(num, den);
    cand.canonicalize();
    if (closed_hi ? Quad(cand) <= hi : Quad(cand) < hi) return cand;
  }
}

// Largest value of v -> a * y - b * x over the profile's breakpoints, which
// by linearity is the maximum over the whole hull.
Rat hull_peak(const RegionSpec& spec, long a, long b) {
  Rat best = Rat(a) * spec.breakpoints.front().second -
             Rat(b) * spec.breakpoints.front().first;
  for (const auto& [x, y] : spec.breakpoints) {
    Rat s = Rat(a) * y - Rat(b) * x;
    if (s > best) best = s;
  }
  return best;
}

// Index of the segment whose closed span contains u, preferring the segment
// to the right at a breakpoint so cover chains always look forward.
size_t segment_at(const RegionSpec& spec, const Rat& u) {
  size_t last = spec.breakpoints.size() - 1;
  for (size_t i = 0; i + 1 < last; ++i)
    if (u < spec.breakpoints[i + 1].first) return i;
  return last - 1;
}

// One band of a subcover: the ladder direction matches the slope of the
// anchor's segment (steepened to a = level over flat stretches), eps = 1 /
// level, R = level^level, and gamma sits in the lowest quarter of the window
// (max(peak, s_u) + width, s_u + 2 * width]. The window is nonempty: on a
// sloped segment the peak equals s_u exactly, and on a flat stretch it
// exceeds s_u by at most 1 < width.
LadderParams band_recipe(const RegionSpec& spec, const Rat& anchor, long level,
                         const Rat& p) {
  long a = level;
  long b = 1;
  if (spec.breakpoints.size() > 1) {
    size_t i = segment_at(spec, anchor);
    Rat slope = (spec.breakpoints[i + 1].second - spec.breakpoints[i].second) /
                (spec.breakpoints[i + 1].first - spec.breakpoints[i].first);
    if (slope > 0) {
      if (!slope.get_num().fits_slong_p() || !slope.get_den().fits_slong_p())
        throw std::invalid_argument("profile slope exceeds the supported range");
      a = slope.get_den().get_si();
      b = slope.get_num().get_si();
    }
  }
  Rat s_u = Rat(a) * region_value(spec, anchor) - Rat(b) * anchor;
  Rat peak = hull_peak(spec, a, b);
  Rat eps = rat(1, level);
  Quad width(rat(0), eps, Int(a) * a + Int(b) * b);
  Quad lo = Quad(std::max(peak, s_u)) + width;
  Quad hi = Quad(s_u) + rat(2) * width;
  Rat gamma = dyadic_between(lo, lo + rat(1, 4) * (hi - lo), true);
  return make_ladder(p, gamma, a, b, pow_int(Int(level), (unsigned long)level),
                     eps);
}

// Right end of the band interval {v in [delta, 1] : a F(v) - b v >
// gamma - 2 width}. The slope functional is concave in v, so the set is a
// single interval and has one downward crossing.
Quad band_right_end(const RegionSpec& spec, const LadderParams& lp) {
  Quad theta = lp.gamma - rat(2) * lp.width;
  auto s_at = [&](size_t i) -> Rat {
    return Rat(lp.a) * spec.breakpoints[i].second -
           Rat(lp.b) * spec.breakpoints[i].first;
  };
  size_t m = spec.breakpoints.size();
  if (Quad(s_at(m - 1)) > theta) return Quad(rat(1));
  for (size_t i = 0; i + 1 < m; ++i) {
    Rat si = s_at(i);
    Rat sj = s_at(i + 1);
    if (Quad(si) > theta && Quad(sj) <= theta) {
      Rat run = (spec.breakpoints[i + 1].first - spec.breakpoints[i].first) /
                (sj - si);
      return Quad(spec.breakpoints[i].first) + run * (theta - Quad(si));
    }
  }
  throw std::logic_error("band interval has no right end");
}

// log2 of the truncated sup model max_{n <= t} (1 + R^{e_n}), mirroring the
// full evaluation but in O(1): the rung exponents are linear in n, so the
// maximum sits at an endpoint.
double cert_log2(const LadderParams& lp, const Quad& s, long t) {
  double lgR = lp.R == 1 ? 0.0 : log2_int(lp.R);
  Quad e1 = rung_exponent(lp, s, 1);
  Quad et = rung_exponent(lp, s, t);
  double best = (e1 >= et ? e1 : et).to_double() * lgR;
  double tail = std::log1p(std::exp2(-std::abs(best))) / std::numbers::ln2;
  return best > 0 ? best + tail : tail;
}

// A certificate ladder together with the truncation level at which it
// becomes active during a scan.
struct Comp {
  LadderParams lp;
  long level = 1;
};

const char* class_name(CellClass c, bool upper) {
  switch (c) {
    case CellClass::bounded:
      return upper ? "BOUNDED" : "bounded";
    case CellClass::unbounded:
      return upper ? "UNBOUNDED" : "unbounded";
    default:
      return upper ? "UNKNOWN" : "unknown";
  }
}

// Seeded norm estimate on a materialized low rung of one active qualifying
// ladder, compared against the model magnitude; agreement within a factor
// of 32 upgrades the cell's provenance. Cells without a smallish ladder
// (R <= 16, direction entries <= 4) keep the model provenance.
bool crosscheck_cell(const std::vector<const Comp*>& active, const Rat& p,
                     const Rat& u, const Rat& w, std::uint64_t seed) {
  for (const Comp* c : active) {
    const LadderParams& lp = c->lp;
    if (lp.R < 2 || lp.R > 16 || lp.a > 4 || lp.b > 4) continue;
    auto rungs = ladder_rungs(lp, 1);
    long er = std::lround(rung_lambda_log2(rungs[0]));
    if (er < -40 || er > 40 || !rungs[0].kappa.fits_slong_p()) continue;
    Rat lambda = pow_rat(rat(2), er);
    long kappa = rungs[0].kappa.get_si();
    ExtRat q = u == 0 ? ExtRat::inf() : ExtRat(Rat(1) / u);
    ExtRat r = w == 0 ? ExtRat::inf() : ExtRat(Rat(1) / w);
    try {
      ClassSpace cs(scaled_family_params(p, lambda, lp.a, lp.b, kappa));
      NormEstimate est = estimate(cs, p, q, r, 40, seed);
      Scalar model = model_norm(p, q, r, lambda, lp.a, lp.b, kappa);
      double gap = est.ascent.log2() - model.log2();
      return std::abs(gap) <= 5.0;
    } catch (const std::exception&) {
      return false;
    }
  }
  return false;
}

RegionCell classify_cell(const RegionSpec& spec, ScanVariant variant,
                         const std::vector<Comp>& comps,
                         const std::vector<long>& depths, double bar,
                         const Rat& p, const Rat& u, const Rat& w,
                         std::uint64_t seed) {
  RegionCell cell;
  cell.depth = depths.back();

  // Graph cells under the closed convention: witnesses from below cannot
  // decide the boundary itself, so the verdict stays open by design.
  bool in_domain =
      spec.kind == DomainKind::closed ? u >= spec.delta : u > spec.delta;
  if (variant == ScanVariant::closed_graph && in_domain &&
      w == region_graph_value(spec, u))
    return cell;

  // Hull-outside cells carry their own separating line from level 1 on, so
  // their certificate does not depend on the enumeration order.
  std::optional<Comp> own;
  if (!hull_contains(spec, u, w)) own = Comp{separating_line(spec, u, w, p), 1};

  std::vector<const Comp*> active;
  active.reserve(comps.size() + 1);
  if (own) active.push_back(&*own);
  for (const Comp& c : comps)
    if (c.level <= depths.back()) active.push_back(&c);

  std::vector<Quad> slopes;
  slopes.reserve(active.size());
  for (const Comp* c : active)
    slopes.push_back(Quad(Rat(c->lp.a) * w - Rat(c->lp.b) * u));

  // Exact divergence: the first depth admitting a ladder whose model is
  // infinite at this slope settles the cell.
  long div_level = 0;
  for (size_t k = 0; k < active.size(); ++k)
    if (slope_divergent(active[k]->lp, slopes[k]))
      if (div_level == 0 || active[k]->level < div_level)
        div_level = active[k]->level;
  if (div_level > 0) {
    cell.cls = CellClass::unbounded;
    for (long d : depths)
      if (d >= div_level) {
        cell.depth = d;
        break;
      }
    if (seed && crosscheck_cell(active, p, u, w, seed))
      cell.prov = Provenance::computed;
    return cell;
  }

  // Certified truncated magnitudes per depth; strict growth past the bar is
  // the divergence heuristic, stagnation supports boundedness.
  std::vector<double> lvl(depths.size(), 0.0);
  for (size_t d = 0; d < depths.size(); ++d)
    for (size_t k = 0; k < active.size(); ++k)
      if (active[k]->level <= depths[d])
        lvl[d] = std::max(lvl[d], cert_log2(active[k]->lp, slopes[k], depths[d]));
  if (depths.size() >= 2) {
    bool growing = lvl.back() > bar;
    for (size_t d = 0; d + 1 < depths.size(); ++d)
      if (lvl[d] >= lvl[d + 1]) growing = false;
    if (growing) {
      cell.cls = CellClass::unbounded;
      if (seed && crosscheck_cell(active, p, u, w, seed))
        cell.prov = Provenance::computed;
      return cell;
    }
  }

  // Bounded when the deep ladders all sit in their flat regime and the
  // magnitudes have stopped moving.
  std::vector<size_t> tail;
  for (size_t k = 0; k < active.size(); ++k)
    if (active[k]->level > depths.back() / 2) tail.push_back(k);
  if (tail.empty())
    for (size_t k = 0; k < active.size(); ++k) tail.push_back(k);
  bool flat = true;
  for (size_t k : tail)
    if (slope_regime(active[k]->lp, slopes[k]) != Regime::bounded) flat = false;
  if (flat && (depths.size() < 2 ||
               lvl.back() - lvl[lvl.size() - 2] < 0.5)) {
    cell.cls = CellClass::bounded;
    if (seed && crosscheck_cell(active, p, u, w, seed))
      cell.prov = Provenance::computed;
  }
  return cell;
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

void check_region(const RegionSpec& spec) {
  if (spec.delta < 0 || spec.delta > 1)
    throw std::invalid_argument("region delta must lie in [0, 1]");
  const auto& bp = spec.breakpoints;
  if (bp.empty() || bp.front().first != spec.delta || bp.back().first != 1)
    throw std::invalid_argument("breakpoints must span [delta, 1]");
  for (size_t i = 0; i + 1 < bp.size(); ++i)
    if (bp[i + 1].first <= bp[i].first)
      throw std::invalid_argument("breakpoint abscissae must increase");
  for (const auto& [x, y] : bp)
    if (y < 0 || y > 1)
      throw std::invalid_argument("profile values must lie in [0, 1]");
  for (size_t i = 0; i + 1 < bp.size(); ++i)
    if (bp[i + 1].second < bp[i].second)
      throw std::invalid_argument("profile must be non-decreasing");
  for (size_t i = 0; i + 2 < bp.size(); ++i) {
    Rat left = (bp[i + 1].second - bp[i].second) /
               (bp[i + 1].first - bp[i].first);
    Rat right = (bp[i + 2].second - bp[i + 1].second) /
                (bp[i + 2].first - bp[i + 1].first);
    if (right > left)
      throw std::invalid_argument("profile must be concave");
  }
  for (const auto& [x, y] : bp)
    if (y > x)
      throw std::invalid_argument("profile must stay at or below the diagonal");
  if (spec.jump) {
    if (*spec.jump < 0 || *spec.jump >= spec.delta)
      throw std::invalid_argument("jump value must lie in [0, delta)");
    if (*spec.jump >= bp.front().second)
      throw std::invalid_argument("jump value must lie below the profile limit");
    if (spec.kind != DomainKind::closed)
      throw std::invalid_argument("jump requires a closed domain");
  }
}

Rat region_value(const RegionSpec& spec, const Rat& u) {
  if (u < spec.delta || u > 1)
    throw std::invalid_argument("abscissa outside the profile domain");
  const auto& bp = spec.breakpoints;
  if (u == bp.front().first) return bp.front().second;
  size_t i = segment_at(spec, u);
  Rat slope = (bp[i + 1].second - bp[i].second) /
              (bp[i + 1].first - bp[i].first);
  return bp[i].second + slope * (u - bp[i].first);
}

Rat region_graph_value(const RegionSpec& spec, const Rat& u) {
  if (spec.jump && u == spec.delta) return *spec.jump;
  return region_value(spec, u);
}

bool hull_contains(const RegionSpec& spec, const Rat& u, const Rat& w) {
  if (u < spec.delta || u > 1 || w < 0) return false;
  return w <= region_value(spec, u);
}

bool claimed_bounded(const RegionSpec& spec, ScanVariant variant, const Rat& u,
                     const Rat& w) {
  bool in_domain =
      spec.kind == DomainKind::closed ? u >= spec.delta : u > spec.delta;
  if (!in_domain || u > 1 || w < 0) return false;
  Rat g = region_graph_value(spec, u);
  return variant == ScanVariant::closed_graph ? w <= g : w < g;
}

LadderParams separating_line(const RegionSpec& spec, const Rat& pu,
                             const Rat& pw, const Rat& p) {
  check_region(spec);
  if (pu < 0 || pu > 1 || pw < 0 || pw > 1)
    throw std::invalid_argument("point lies outside the unit square");
  if (hull_contains(spec, pu, pw)) {
    if (pu > spec.delta && pw < region_value(spec, pu))
      throw std::invalid_argument("point lies inside the region");
    throw std::invalid_argument("no positive margin");
  }

  // Candidate directions: the profile's own segment slopes, then dyadic
  // sweeps of shallow and steep lines. Duplicates are harmless; the first
  // occurrence wins ties.
  std::vector<std::pair<long, long>> dirs;  // (b, a)
  const auto& bp = spec.breakpoints;
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    Rat slope = (bp[i + 1].second - bp[i].second) /
                (bp[i + 1].first - bp[i].first);
    if (slope > 0 && slope.get_num().fits_slong_p() &&
        slope.get_den().fits_slong_p())
      dirs.emplace_back(slope.get_num().get_si(), slope.get_den().get_si());
  }
  for (long j = 0; j <= 40; ++j) dirs.emplace_back(1, 1L << j);
  for (long j = 0; j <= 40; ++j) dirs.emplace_back(1L << j, 1);

  struct Scored {
    long a, b;
    Rat margin;
    Int D;
  };
  std::vector<Scored> scored;
  for (const auto& [b, a] : dirs) {
    Rat margin = Rat(a) * pw - Rat(b) * pu - hull_peak(spec, a, b);
    if (margin > 0) scored.push_back({a, b, margin, Int(a) * a + Int(b) * b});
  }
  if (scored.empty()) throw std::invalid_argument("no positive margin");

  // Score is margin^2 / D, the squared distance from the line to the hull.
  // Among the candidates within a quarter of the best score the earliest
  // wins, which keeps the chosen direction small when steeper and steeper
  // lines improve the score only marginally.
  auto score_num = [](const Scored& s) -> Rat { return s.margin * s.margin; };
  size_t best = 0;
  for (size_t k = 1; k < scored.size(); ++k)
    if (score_num(scored[k]) * Rat(scored[best].D) >
        score_num(scored[best]) * Rat(scored[k].D))
      best = k;
  size_t pick = best;
  for (size_t k = 0; k < scored.size(); ++k)
    if (rat(4) * score_num(scored[k]) * Rat(scored[best].D) >=
        score_num(scored[best]) * Rat(scored[k].D)) {
      pick = k;
      break;
    }

  const Scored& s = scored[pick];
  Rat gamma = Rat(s.a) * pw - Rat(s.b) * pu;
  Rat eps = s.margin / (rat(3) * Rat(s.D));
  return make_ladder(p, gamma, s.a, s.b, Int(2), eps);
}

std::vector<std::pair<Rat, Rat>> enumerate_outside(const RegionSpec& spec,
                                                   long cap) {
  if (cap < 1) throw std::invalid_argument("cap must be at least 1");
  check_region(spec);
  std::set<Rat> fracs;
  for (long den = 1; den <= cap; ++den)
    for (long num = 0; num <= den; ++num) fracs.insert(rat(num, den));
  std::vector<std::pair<Rat, Rat>> out;
  for (const Rat& u : fracs)
    for (const Rat& w : fracs)
      if (!hull_contains(spec, u, w)) out.emplace_back(u, w);
  return out;
}

std::vector<CoverEntry> finite_subcover(const RegionSpec& spec, long level,
                                        const Rat& p) {
  if (level < 1) throw std::invalid_argument("level must be at least 1");
  check_region(spec);
  std::vector<CoverEntry> out;
  Rat anchor = spec.delta;
  long guard = 64 * level + 64;
  while (true) {
    if (--guard < 0)
      throw std::runtime_error("cover stalled at " + rat_str(anchor));
    LadderParams lp = band_recipe(spec, anchor, level, p);
    out.push_back({anchor, lp});
    Quad right = band_right_end(spec, lp);
    if (right >= Quad(rat(1))) break;
    // The next anchor sits in the upper half of the current band, so the
    // bands overlap and the chain advances toward the right end.
    Quad mid = rat(1, 2) * (Quad(anchor) + right);
    anchor = dyadic_between(mid, right, false);
  }
  return out;
}

RegionMap scan(const RegionSpec& spec, ScanVariant variant, long grid,
               const std::vector<long>& depths, const Rat& p) {
  if (grid < 1) throw std::invalid_argument("grid resolution must be at least 1");
  if (depths.empty())
    throw std::invalid_argument("need at least one truncation depth");
  for (size_t d = 0; d + 1 < depths.size(); ++d)
    if (depths[d + 1] <= depths[d])
      throw std::invalid_argument("truncation depths must increase");
  check_region(spec);

  RegionMap map;
  map.spec = spec;
  map.variant = variant;
  map.grid = grid;
  map.depths = depths;
  map.blowup_log2 = std::log2(1e6);

  long top = depths.back();
  std::vector<Comp> comps;
  if (variant == ScanVariant::closed_graph) {
    long lvl = 0;
    for (const auto& [eu, ew] : enumerate_outside(spec, std::max<long>(2, grid))) {
      if (lvl == top) break;
      comps.push_back({separating_line(spec, eu, ew, p), ++lvl});
    }
    if (spec.jump) {
      auto edge = threshold_ladders({p, spec.delta, *spec.jump, EdgeRule::closed}, top);
      for (size_t n = 0; n < edge.size(); ++n)
        comps.push_back({edge[n], static_cast<long>(n) + 1});
    } else if (spec.kind == DomainKind::half_open) {
      auto edge = threshold_ladders({p, spec.delta, rat(0), EdgeRule::open}, top);
      for (size_t n = 0; n < edge.size(); ++n)
        comps.push_back({edge[n], static_cast<long>(n) + 1});
    }
  } else {
    for (long n = 1; n <= top; ++n)
      for (const CoverEntry& e : finite_subcover(spec, n, p))
        comps.push_back({e.ladder, n});
    // The bands cover only the domain side; points left of delta need their
    // own avoidance lines.
    long lvl = 0;
    for (const auto& [eu, ew] : enumerate_outside(spec, std::max<long>(2, grid))) {
      if (eu >= spec.delta) continue;
      if (lvl == top) break;
      comps.push_back({separating_line(spec, eu, ew, p), ++lvl});
    }
    if (spec.jump) {
      auto edge = threshold_ladders({p, spec.delta, *spec.jump, EdgeRule::open}, top);
      for (size_t n = 0; n < edge.size(); ++n)
        comps.push_back({edge[n], static_cast<long>(n) + 1});
    } else if (spec.kind == DomainKind::half_open) {
      auto edge = threshold_ladders({p, spec.delta, rat(0), EdgeRule::open}, top);
      for (size_t n = 0; n < edge.size(); ++n)
        comps.push_back({edge[n], static_cast<long>(n) + 1});
    }
  }

  long rows = grid + 1;
  map.cells.resize(static_cast<size_t>(rows) * rows);
  long workers = std::max(1u, std::thread::hardware_concurrency());
  long chunk = (rows + workers - 1) / workers;
  std::vector<std::future<void>> futs;
  for (long first = 0; first < rows; first += chunk) {
    long last = std::min(rows, first + chunk);
    futs.push_back(std::async(std::launch::async, [&, first, last] {
      for (long i = first; i < last; ++i)
        for (long j = 0; j < rows; ++j) {
          size_t idx = static_cast<size_t>(i) * rows + j;
          // A deterministic stride of cells gets the numeric cross-check.
          std::uint64_t seed = idx % 7 == 0 ? idx + 1 : 0;
          map.cells[idx] = classify_cell(spec, variant, comps, depths,
                                         map.blowup_log2, p, rat(i, grid),
                                         rat(j, grid), seed);
        }
    }));
  }
  for (auto& f : futs) f.get();
  return map;
}

std::vector<AxiomViolation> axioms_check(const RegionMap& map) {
  std::vector<AxiomViolation> out;
  long n = map.grid;
  auto point = [&](long i, long j) {
    return "(" + rat_str(rat(i, n)) + ", " + rat_str(rat(j, n)) + ")";
  };
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n; ++j) {
      if (map.at(i, j).cls != CellClass::bounded) continue;
      if (j > i)
        out.push_back({"diagonal", rat(i, n), rat(j, n),
                       "bounded cell above the diagonal at " + point(i, j)});
      // Shrinking w and growing u only helps, so no unbounded cell may
      // appear to the lower right of a bounded one.
      bool hit = false;
      for (long i2 = i; i2 <= n && !hit; ++i2)
        for (long j2 = 0; j2 <= j && !hit; ++j2)
          if (map.at(i2, j2).cls == CellClass::unbounded) {
            out.push_back({"monotonicity", rat(i2, n), rat(j2, n),
                           "unbounded at " + point(i2, j2) +
                               " despite bounded at " + point(i, j)});
            hit = true;
          }
    }
  // Interpolation between two bounded cells keeps the midpoint bounded.
  for (long i1 = 0; i1 <= n; ++i1)
    for (long j1 = 0; j1 <= n; ++j1) {
      if (map.at(i1, j1).cls != CellClass::bounded) continue;
      for (long i2 = i1; i2 <= n; ++i2)
        for (long j2 = 0; j2 <= n; ++j2) {
          if (map.at(i2, j2).cls != CellClass::bounded) continue;
          if ((i1 + i2) % 2 || (j1 + j2) % 2) continue;
          long im = (i1 + i2) / 2;
          long jm = (j1 + j2) / 2;
          if (map.at(im, jm).cls == CellClass::unbounded)
            out.push_back({"midpoint", rat(im, n), rat(jm, n),
                           "unbounded midpoint " + point(im, jm) +
                               " of bounded " + point(i1, j1) + " and " +
                               point(i2, j2)});
        }
    }
  return out;
}

std::string emit(const RegionMap& map, ArtifactFormat format) {
  long n = map.grid;
  if (format == ArtifactFormat::csv) {
    std::string out = "u,w,class,provenance,depth\n";
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j) {
        const RegionCell& c = map.at(i, j);
        out += rat_str(rat(i, n)) + "," + rat_str(rat(j, n)) + "," +
               class_name(c.cls, true) + "," +
               (c.prov == Provenance::computed ? "computed" : "model") + "," +
               std::to_string(c.depth) + "\n";
      }
    return out;
  }

  if (format == ArtifactFormat::svg) {
    const double margin = 40.0;
    const double plot = 720.0;
    auto px = [&](double u) { return margin + plot * u; };
    auto py = [&](double w) { return margin + plot - plot * w; };
    double side = 0.8 * plot / n;
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        "width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
        "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j) {
        const char* fill = "#f08c00";
        if (map.at(i, j).cls == CellClass::bounded) fill = "#2b8a3e";
        if (map.at(i, j).cls == CellClass::unbounded) fill = "#c92a2a";
        double cx = px(double(i) / n);
        double cy = py(double(j) / n);
        out += "<rect x=\"" + fixed2(cx - side / 2) + "\" y=\"" +
               fixed2(cy - side / 2) + "\" width=\"" + fixed2(side) +
               "\" height=\"" + fixed2(side) + "\" fill=\"" + fill + "\"/>\n";
      }
    double dx = px(to_double(map.spec.delta));
    out += "<line x1=\"" + fixed2(dx) + "\" y1=\"" + fixed2(margin) +
           "\" x2=\"" + fixed2(dx) + "\" y2=\"" + fixed2(margin + plot) +
           "\" stroke=\"#495057\" stroke-width=\"1\" "
           "stroke-dasharray=\"6 4\"/>\n";
    out += "<polyline points=\"";
    for (size_t k = 0; k < map.spec.breakpoints.size(); ++k) {
      if (k) out += " ";
      out += fixed2(px(to_double(map.spec.breakpoints[k].first))) + "," +
             fixed2(py(to_double(map.spec.breakpoints[k].second)));
    }
    out += "\" fill=\"none\" stroke=\"#1c7ed6\" stroke-width=\"2\"/>\n</svg>\n";
    return out;
  }

  nlohmann::ordered_json doc;
  doc["grid"] = map.grid;
  doc["variant"] =
      map.variant == ScanVariant::closed_graph ? "closed-graph" : "open-graph";
  doc["depths"] = map.depths;
  doc["blowup_log2"] = map.blowup_log2;
  doc["delta"] = rat_str(map.spec.delta);
  doc["domain"] = map.spec.kind == DomainKind::closed ? "closed" : "half-open";
  doc["jump"] = map.spec.jump ? nlohmann::ordered_json(rat_str(*map.spec.jump))
                              : nlohmann::ordered_json(nullptr);
  doc["breakpoints"] = nlohmann::ordered_json::array();
  for (const auto& [x, y] : map.spec.breakpoints)
    doc["breakpoints"].push_back({rat_str(x), rat_str(y)});
  doc["cells"] = nlohmann::ordered_json::array();
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n; ++j) {
      const RegionCell& c = map.at(i, j);
      nlohmann::ordered_json cell;
      cell["u"] = rat_str(rat(i, n));
      cell["w"] = rat_str(rat(j, n));
      cell["class"] = class_name(c.cls, false);
      cell["provenance"] = c.prov == Provenance::computed ? "computed" : "model";
      cell["depth"] = c.depth;
      doc["cells"].push_back(cell);
    }
  return doc.dump(2) + "\n";
}

}  // namespace lml
