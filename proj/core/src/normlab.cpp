#include "lml/normlab.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lml {

namespace {

const Rat kFactors[4] = {rat(1, 2), rat(2), rat(9, 8), rat(7, 8)};

void check_indices(const Rat& p, const ExtRat& q, const ExtRat& r) {
  if (p <= 1) throw std::invalid_argument("p must exceed 1");
  if ((!q.infinite && q.value < 1) || (!r.infinite && r.value < 1))
    throw std::invalid_argument("indices must be at least 1");
}

LogExp class_ratio(const ClassSpace& cs, const ClassFn& f, const Rat& p,
                   const ExtRat& q, const ExtRat& r) {
  ClassFn mf = maximal_fn_classes(cs, f);
  return class_lorentz_norm(mf, cs, p, r) / class_lorentz_norm(f, cs, p, q);
}

Scalar fn_ratio(const Space& sp, const Fn& f, const Rat& p, const ExtRat& q,
                const ExtRat& r) {
  Fn mf = maximal_fn(f, sp);
  return lorentz_norm(mf, sp, p, r) / lorentz_norm(f, sp, p, q);
}

std::string format_scalar(const Scalar& v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v.to_double());
  return buf;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double cov = 0.0, var = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    var += (xs[i] - mx) * (xs[i] - mx);
  }
  return var == 0.0 ? 0.0 : cov / var;
}

}  // namespace

NormEstimate estimate(const ClassSpace& cs, const Rat& p, const ExtRat& q,
                      const ExtRat& r, long budget, std::uint64_t seed) {
  check_indices(p, q, r);
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");

  NormEstimate out;
  out.seed = seed;

  ClassFn cur = ClassFn::zero(cs);
  LogExp best;
  bool first = true;
  for (Witness& w : witness_functions(cs, p)) {
    LogExp v = class_ratio(cs, w.fn, p, q, r);
    if (first || v > best) {
      best = v;
      out.witness = w.name;
      cur = std::move(w.fn);
      first = false;
    }
  }
  out.lower = best.to_scalar();

  const size_t n = cur.ground.size();
  const size_t total = n + cur.halo.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> coord(0, total - 1);
  std::uniform_int_distribution<int> pick(0, 3);
  LogExp cur_v = best;
  for (long step = 0; step < budget; ++step) {
    size_t c = coord(rng);
    const Rat& factor = kFactors[pick(rng)];
    LogExp& slot = c < n ? cur.ground[c] : cur.halo[c - n];
    if (slot.is_zero()) continue;
    LogExp saved = slot;
    slot = slot.mul_rat(factor);
    LogExp v = class_ratio(cs, cur, p, q, r);
    if (v > cur_v)
      cur_v = v;
    else
      slot = saved;
  }
  out.ascent = cur_v.to_scalar();
  return out;
}

NormEstimate estimate(const Space& sp, const Rat& p, const ExtRat& q,
                      const ExtRat& r, long budget, std::uint64_t seed) {
  check_indices(p, q, r);
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  if (sp.size() == 0) throw std::invalid_argument("space must be nonempty");

  NormEstimate out;
  out.seed = seed;

  Fn cur = Fn::constant(sp.size(), Scalar::one());
  Scalar best = fn_ratio(sp, cur, p, q, r);
  out.witness = "all";
  for (size_t i = 0; i < sp.size(); ++i) {
    Fn f = Fn::indicator(sp.size(), {i});
    Scalar v = fn_ratio(sp, f, p, q, r);
    if (v > best) {
      best = v;
      out.witness = sp.label(i);
      cur = std::move(f);
    }
  }
  out.lower = best;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> coord(0, sp.size() - 1);
  std::uniform_int_distribution<int> pick(0, 3);
  Scalar cur_v = best;
  for (long step = 0; step < budget; ++step) {
    size_t c = coord(rng);
    const Rat& factor = kFactors[pick(rng)];
    if (cur.values[c].is_zero()) continue;
    Scalar saved = cur.values[c];
    cur.values[c] = cur.values[c].mul_rat(factor);
    Scalar v = fn_ratio(sp, cur, p, q, r);
    if (v > cur_v)
      cur_v = v;
    else
      cur.values[c] = saved;
  }
  out.ascent = cur_v;
  return out;
}

Scalar replay_witness(const ClassSpace& cs, const Rat& p, const ExtRat& q,
                      const ExtRat& r, const std::string& id) {
  check_indices(p, q, r);
  for (const Witness& w : witness_functions(cs, p))
    if (w.name == id) return class_ratio(cs, w.fn, p, q, r).to_scalar();
  throw std::invalid_argument("unknown witness id");
}

Scalar replay_witness(const Space& sp, const Rat& p, const ExtRat& q,
                      const ExtRat& r, const std::string& id) {
  check_indices(p, q, r);
  if (id == "all")
    return fn_ratio(sp, Fn::constant(sp.size(), Scalar::one()), p, q, r);
  auto i = sp.find_label(id);
  if (!i) throw std::invalid_argument("unknown witness id");
  return fn_ratio(sp, Fn::indicator(sp.size(), {*i}), p, q, r);
}

ScalingProbe scaling_probe(const Rat& p, const ExtRat& q, const ExtRat& r,
                           const Rat& lambda, long a, long b,
                           const std::vector<long>& kappas, long budget,
                           std::uint64_t seed) {
  check_indices(p, q, r);
  if (!(q <= r)) throw std::invalid_argument("model needs q <= r");
  if (kappas.empty()) throw std::invalid_argument("need at least one kappa");

  ScalingProbe out;
  Scalar lo, hi;
  for (size_t i = 0; i < kappas.size(); ++i) {
    long kappa = kappas[i];
    TestSpaceParams params = scaled_family_params(p, lambda, a, b, kappa);
    ClassSpace cs(params);
    std::uint64_t derived = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    NormEstimate est = estimate(cs, p, q, r, budget, derived);
    est.model = model_norm(p, q, r, lambda, a, b, kappa);
    Scalar ratio = est.ascent / *est.model;
    if (out.points.empty() || ratio < lo) lo = ratio;
    if (out.points.empty() || ratio > hi) hi = ratio;
    out.points.push_back({kappa, std::move(est), std::move(ratio)});
  }
  out.spread = hi / lo;
  return out;
}

Space stack_space(long n_max) {
  if (n_max < 1) throw std::invalid_argument("need at least one atom");
  std::vector<Scalar> weights;
  std::vector<std::string> labels;
  for (long n = 1; n <= n_max; ++n) {
    weights.push_back(Scalar::pow2(n));
    labels.push_back("e" + std::to_string(n));
  }
  Space sp(weights, labels);
  for (size_t i = 0; i < sp.size(); ++i)
    for (size_t j = i + 1; j < sp.size(); ++j) sp.set_dist(i, j, rat(2));
  sp.freeze();
  return sp;
}

R1Probe r1_probe(const Space& sp, const Rat& p, const Rat& q, const Rat& r,
                 const std::vector<long>& n0s) {
  if (p <= 1) throw std::invalid_argument("p must exceed 1");
  if (r < 1 || q < r) throw std::invalid_argument("probe needs 1 <= r <= q");
  if (n0s.empty()) throw std::invalid_argument("need at least one truncation");
  long deepest = *std::max_element(n0s.begin(), n0s.end());
  if (deepest < 1) throw std::invalid_argument("need at least one truncation");

  // Greedy dominating selection: scanning points by increasing weight, keep
  // each one that outweighs everything kept so far. The kept atoms then
  // satisfy the stacking condition mu(E_n) >= mu(E_1 u .. u E_{n-1}).
  std::vector<size_t> order(sp.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return sp.weight(x) < sp.weight(y);
  });
  std::vector<size_t> atoms;
  Scalar run = Scalar::zero();
  for (size_t i : order) {
    if (sp.weight(i).is_zero()) continue;
    if (atoms.empty() || sp.weight(i) >= run) {
      atoms.push_back(i);
      run = run + sp.weight(i);
    }
  }
  if (static_cast<long>(atoms.size()) < deepest)
    throw std::invalid_argument("not enough disjoint mass");

  const Rat coeff_exp = Rat(-2) / (q + r);
  R1Probe out;
  std::vector<double> xs, ys;
  for (long n0 : n0s) {
    if (n0 < 1) throw std::invalid_argument("need at least one truncation");
    Fn g = Fn::zero(sp.size());
    for (long n = 1; n <= n0; ++n) {
      size_t at = atoms[static_cast<size_t>(n - 1)];
      g.values[at] =
          Scalar::rat_pow(Rat(n), coeff_exp) * sp.weight(at).pow(Rat(-1) / p);
    }
    Scalar ratio = lorentz_norm(g, sp, p, r) / lorentz_norm(g, sp, p, q);
    xs.push_back(std::log2(static_cast<double>(n0)));
    ys.push_back(ratio.log2());
    out.points.push_back({n0, std::move(ratio)});
  }
  out.growth = fit_slope(xs, ys);
  out.predicted = Rat((q - r) / (r * (q + r))).get_d();
  return out;
}

std::vector<NormEstimate> grid_estimate(const ClassSpace& cs, const Rat& p,
                                        const std::vector<GridCell>& cells,
                                        long budget, std::uint64_t seed) {
  std::vector<std::future<NormEstimate>> futs;
  futs.reserve(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    std::uint64_t cell_seed = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    futs.push_back(std::async(std::launch::async, [&cs, &p, &cells, i, budget,
                                                   cell_seed] {
      return estimate(cs, p, cells[i].q, cells[i].r, budget, cell_seed);
    }));
  }
  std::vector<NormEstimate> out;
  out.reserve(cells.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

std::string csv_header() {
  return "p,q,r,space-id,lower,ascent,model,seed,witness-id";
}

std::string csv_row(const Rat& p, const ExtRat& q, const ExtRat& r,
                    const std::string& space_id, const NormEstimate& est) {
  std::ostringstream o;
  o << rat_str(p) << ',' << q.str() << ',' << r.str() << ',' << space_id << ','
    << format_scalar(est.lower) << ',' << format_scalar(est.ascent) << ',';
  if (est.model) o << format_scalar(*est.model);
  o << ',' << est.seed << ',' << est.witness;
  return o.str();
}

}  // namespace lml
