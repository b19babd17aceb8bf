#include "lml/lorentz.hpp"

#include "lml/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace lml {

ExtRat parse_ext(const std::string& text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  lower.erase(std::remove(lower.begin(), lower.end(), ' '), lower.end());
  if (lower == "inf" || lower == "infinity" || lower == "oo")
    return ExtRat::inf();
  return ExtRat(parse_rat(text));
}

void require_p(const Rat& p) {
  if (p <= 1) throw std::invalid_argument("p must exceed 1");
}

void require_index(const ExtRat& q) {
  if (!q.infinite && q.value < 1)
    throw std::invalid_argument("secondary index must be at least 1");
}

Scalar lorentz_norm(const StepFn& d, const Rat& p, const ExtRat& q) {
  std::vector<std::pair<Scalar, Scalar>> steps;
  steps.reserve(d.steps.size());
  for (const StepFn::Step& s : d.steps) steps.emplace_back(s.threshold, s.mass);
  return lorentz_norm_steps<Scalar>(steps, p, q);
}

Scalar lorentz_norm(const Fn& f, const Space& space, const Rat& p,
                    const ExtRat& q) {
  return lorentz_norm(distribution(f, space), p, q);
}

Scalar lebesgue_norm(const Fn& f, const Space& space, const Rat& p) {
  if (p <= 0) throw std::invalid_argument("Lebesgue exponent must be positive");
  Scalar sum = Scalar::zero();
  for (size_t i = 0; i < space.size(); ++i)
    sum = sum + f.values[i].pow(p) * space.weight(i);
  return sum.pow(1 / p);
}

Scalar l1_norm(const Fn& f, const Space& space) {
  Scalar sum = Scalar::zero();
  for (size_t i = 0; i < space.size(); ++i)
    sum = sum + f.values[i] * space.weight(i);
  return sum;
}

Fn avg_fn(const Fn& f, const Space& space) {
  return Fn::constant(space.size(), l1_norm(f, space) / space.total_measure());
}

Fn fn_add(const Fn& a, const Fn& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("function sizes differ");
  Fn out = a;
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = out.values[i] + b.values[i];
  return out;
}

Fn fn_scale(const Fn& f, const Scalar& c) {
  Fn out = f;
  for (Scalar& v : out.values) v = v * c;
  return out;
}

bool stacking_check(const std::vector<Fn>& fs, const Space& space) {
  std::vector<bool> used(space.size(), false);
  for (const Fn& f : fs)
    for (size_t i : f.support()) {
      if (used[i]) throw std::invalid_argument("overlapping supports");
      used[i] = true;
    }
  Scalar prior = Scalar::zero();
  for (size_t n = 0; n < fs.size(); ++n) {
    StepFn d = distribution(fs[n], space);
    if (n > 0 && !d.empty() && d.steps.front().mass < prior) return false;
    for (size_t i : fs[n].support()) prior = prior + space.weight(i);
  }
  return true;
}

BlockRatio block_comparability(const std::vector<Fn>& fs, const Space& space,
                               const Rat& p, const ExtRat& q) {
  if (fs.empty()) throw std::invalid_argument("empty function family");
  if (!stacking_check(fs, space))
    throw std::invalid_argument("stacking violated");

  Fn total = fs.front();
  for (size_t n = 1; n < fs.size(); ++n) total = fn_add(total, fs[n]);
  Scalar whole = lorentz_norm(total, space, p, q);

  Scalar agg;
  if (q.infinite) {
    agg = Scalar::zero();
    for (const Fn& f : fs) {
      Scalar nf = lorentz_norm(f, space, p, q);
      if (nf > agg) agg = nf;
    }
  } else {
    Scalar sum = Scalar::zero();
    for (const Fn& f : fs)
      sum = sum + lorentz_norm(f, space, p, q).pow(q.value);
    agg = sum.pow(1 / q.value);
  }
  if (agg.is_zero() || whole.is_zero())
    throw std::invalid_argument("block comparability needs nonzero functions");
  Scalar ratio = whole / agg;
  return {ratio, Scalar::one() / ratio};
}

Scalar block_bound(const Rat& p, const ExtRat& q) {
  require_p(p);
  require_index(q);
  Scalar lead = Scalar::rat_pow(2, 1 / p);
  if (q.infinite) return lead;
  Scalar gap = Scalar::one() - Scalar::rat_pow(2, -(q.value / p));
  return lead * gap.pow(-(1 / q.value));
}

ProbeConstants empirical_constant_probes(
    const std::function<Space(std::mt19937_64&)>& sampler, const Rat& p,
    const ExtRat& q, const ExtRat& r, int trials, uint64_t seed) {
  require_p(p);
  require_index(q);
  require_index(r);
  if (!(q <= r))
    throw std::invalid_argument("embedding probe needs q <= r");

  std::mt19937_64 rng(seed);
  ProbeConstants out{Scalar::zero(), Scalar::zero(), Scalar::zero()};
  for (int t = 0; t < trials; ++t) {
    Space space = sampler(rng);
    const size_t family = 2 + rng() % 3;
    std::vector<Fn> fs;
    Fn total = Fn::zero(space.size());
    Scalar norm_sum = Scalar::zero();
    for (size_t n = 0; n < family; ++n) {
      Fn f = sample_fn(space, rng);
      total = fn_add(total, f);
      norm_sum = norm_sum + lorentz_norm(f, space, p, q);
      fs.push_back(std::move(f));
    }
    if (!norm_sum.is_zero()) {
      Scalar ratio = lorentz_norm(total, space, p, q) / norm_sum;
      if (ratio > out.c_triangle) out.c_triangle = ratio;
    }

    Fn f = sample_fn(space, rng);
    Scalar nf = lorentz_norm(f, space, p, q);
    if (!nf.is_zero()) {
      Scalar avg_ratio = lorentz_norm(avg_fn(f, space), space, p, q) / nf;
      if (avg_ratio > out.c_average) out.c_average = avg_ratio;
      Scalar emb_ratio = lorentz_norm(f, space, p, r) / nf;
      if (emb_ratio > out.c_embedding) out.c_embedding = emb_ratio;
    }
  }
  return out;
}

}  // namespace lml
