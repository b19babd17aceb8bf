#include "lml/testspace.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "lml/maximal.hpp"

namespace lml {

namespace {

// p = pn/pd with pn > pd >= 1; the integer constraint comparisons raise
// both sides to the pd-th power, so pn and pd must fit an unsigned long.
struct PExp {
  unsigned long pn, pd;
};

PExp split_p(const Rat& p) {
  require_p(p);
  if (!p.get_num().fits_ulong_p() || !p.get_den().fits_ulong_p())
    throw std::invalid_argument("exponent p has an impractically large form");
  return {p.get_num().get_ui(), p.get_den().get_ui()};
}

Int pow2_int_bits(unsigned long e) {
  Int r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
  return r;
}

size_t bits_of(const Int& n) { return mpz_sizeinbase(n.get_mpz_t(), 2); }

// Smallest c with 2^c >= L, for L >= 1.
long ceil_log2_long(long L) {
  if (L <= 1) return 0;
  return std::bit_width(static_cast<unsigned long>(L - 1));
}

void require_positive(const std::vector<Int>& v, const char* what) {
  for (const Int& x : v)
    if (x < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}

// 1 <= value^{1-p} * other < 2 tested exactly on integers:
// other^{pd} >= value^{pn-pd} and other^{pd} < 2^{pd} value^{pn-pd}.
void check_window(const Int& value, const Int& other, const PExp& pe,
                  const char* which) {
  Int lhs = pow_int(other, pe.pd);
  Int rhs = pow_int(value, pe.pn - pe.pd);
  if (lhs < rhs)
    throw std::invalid_argument(std::string(which) + ": lower window bound violated");
  if (lhs >= rhs * pow2_int_bits(pe.pd))
    throw std::invalid_argument(std::string(which) + ": upper window bound violated");
}

// Same window test in exponent form: 0 <= (1-p) ev + eo < 1.
void check_window_log(const Int& ev, const Int& eo, const Rat& p,
                      const char* which) {
  Rat x = Rat(eo) - (p - 1) * Rat(ev);
  if (x < 0)
    throw std::invalid_argument(std::string(which) + ": lower window bound violated");
  if (x >= 1)
    throw std::invalid_argument(std::string(which) + ": upper window bound violated");
}

}  // namespace

LogExp SequenceSet::m_val(size_t i) const {
  return log_tier ? LogExp::pow2_int(em.at(i)) : LogExp::from_rat(Rat(m.at(i)));
}
LogExp SequenceSet::h_val(size_t i) const {
  return log_tier ? LogExp::pow2_int(eh.at(i)) : LogExp::from_rat(Rat(h.at(i)));
}
LogExp SequenceSet::alpha_val(size_t k) const {
  return log_tier ? LogExp::pow2_int(ealpha.at(k))
                  : LogExp::from_rat(Rat(alpha.at(k)));
}
LogExp SequenceSet::beta_val(size_t k) const {
  return log_tier ? LogExp::pow2_int(ebeta.at(k))
                  : LogExp::from_rat(Rat(beta.at(k)));
}
LogExp SequenceSet::h_last() const { return h_val(static_cast<size_t>(N) - 1); }

void check_sequences(const SequenceSet& s) {
  require_p(s.p);
  if (s.N < 1 || s.M < 1 || s.L < 1)
    throw std::invalid_argument("N, M and L must be positive");
  const size_t N = static_cast<size_t>(s.N);
  const size_t M = static_cast<size_t>(s.M);

  if (!s.log_tier) {
    if (s.m.size() != N || s.h.size() != N || s.alpha.size() != M ||
        s.beta.size() != M)
      throw std::invalid_argument("sequence lengths do not match N and M");
    require_positive(s.m, "m");
    require_positive(s.h, "h");
    require_positive(s.alpha, "alpha");
    require_positive(s.beta, "beta");
    PExp pe = split_p(s.p);
    const Int& hN = s.h[N - 1];
    for (size_t i = 0; i < N; ++i) {
      if (hN % s.h[i] != 0)
        throw std::invalid_argument("(i): h_N not divisible by h_i");
      if (i + 1 < N && s.m[i + 1] < 2 * s.m[i] * s.h[i])
        throw std::invalid_argument("(ii): m growth too slow");
      check_window(s.m[i], s.h[i], pe, "(iii)");
    }
    if (s.alpha[0] < 2 * s.m[N - 1] * hN)
      throw std::invalid_argument("(iv): alpha_1 too small");
    for (size_t k = 0; k < M; ++k) {
      if (k + 1 < M && s.alpha[k + 1] < 2 * s.alpha[k] * s.L * s.beta[k] * hN)
        throw std::invalid_argument("(v): alpha growth too slow");
      check_window(s.alpha[k], s.beta[k] * hN, pe, "(vi)");
    }
    return;
  }

  if (s.em.size() != N || s.eh.size() != N || s.ealpha.size() != M ||
      s.ebeta.size() != M)
    throw std::invalid_argument("sequence lengths do not match N and M");
  for (const std::vector<Int>* v : {&s.em, &s.eh, &s.ealpha, &s.ebeta})
    for (const Int& e : *v)
      if (e < 0) throw std::invalid_argument("negative exponent");
  const Int& ehN = s.eh[N - 1];
  for (size_t i = 0; i < N; ++i) {
    if (ehN < s.eh[i])
      throw std::invalid_argument("(i): h_N not divisible by h_i");
    if (i + 1 < N && s.em[i + 1] < 1 + s.em[i] + s.eh[i])
      throw std::invalid_argument("(ii): m growth too slow");
    check_window_log(s.em[i], s.eh[i], s.p, "(iii)");
  }
  if (s.ealpha[0] < 1 + s.em[N - 1] + ehN)
    throw std::invalid_argument("(iv): alpha_1 too small");
  for (size_t k = 0; k < M; ++k) {
    if (k + 1 < M) {
      // alpha_{k+1} >= 2 alpha_k L beta_k h_N with alpha, beta, h powers of
      // two: the exponent gap must cover L.
      Int gap = s.ealpha[k + 1] - 1 - s.ealpha[k] - s.ebeta[k] - ehN;
      bool ok;
      if (gap >= 64)
        ok = true;
      else if (gap < 0)
        ok = false;
      else
        ok = (1L << gap.get_si()) >= s.L;
      if (!ok) throw std::invalid_argument("(v): alpha growth too slow");
    }
    check_window_log(s.ealpha[k], s.ebeta[k] + ehN, s.p, "(vi)");
  }
}

namespace {

// Smallest e >= 0 with (2^e)^{pd} >= t.
long min_pow2_exponent(const Int& t, unsigned long pd) {
  long e = static_cast<long>((bits_of(t) - 1 + pd - 1) / pd);
  while (pow2_int_bits(static_cast<unsigned long>(e) * pd) < t) ++e;
  while (e > 0 && pow2_int_bits(static_cast<unsigned long>(e - 1) * pd) >= t)
    --e;
  return e;
}

// Smallest b >= 1 with (b * hN)^{pd} >= t.
Int min_beta(const Int& t, const Int& hN, unsigned long pd) {
  Int root;
  mpz_root(root.get_mpz_t(), t.get_mpz_t(), pd);
  Int b = root / hN;
  if (b < 1) b = 1;
  while (pow_int(b * hN, pd) < t) ++b;
  while (b > 1 && pow_int((b - 1) * hN, pd) >= t) --b;
  return b;
}

SequenceSet generate_log_tier(const Rat& p, long N, long M, long L) {
  SequenceSet s;
  s.p = p;
  s.N = N;
  s.M = M;
  s.L = L;
  s.log_tier = true;
  Rat pm1 = p - 1;
  Int em = 0;
  for (long i = 0; i < N; ++i) {
    Int eh = ceil_rat(pm1 * Rat(em));
    s.em.push_back(em);
    s.eh.push_back(eh);
    em = 1 + em + eh;
  }
  const Int& ehN = s.eh.back();
  Int ea = 1 + s.em.back() + ehN;
  const long cl2L = ceil_log2_long(L);
  for (long k = 0; k < M; ++k) {
    Int eb = ceil_rat(pm1 * Rat(ea) - Rat(ehN));
    if (eb < 0) eb = 0;
    s.ealpha.push_back(ea);
    s.ebeta.push_back(eb);
    ea = 1 + ea + eb + ehN + cl2L;
  }
  check_sequences(s);
  return s;
}

}  // namespace

SequenceSet generate_sequences(const Rat& p, long N, long M, long L,
                               size_t max_bits) {
  PExp pe = split_p(p);
  if (N < 1 || M < 1 || L < 1)
    throw std::invalid_argument("N, M and L must be positive");

  SequenceSet s;
  s.p = p;
  s.N = N;
  s.M = M;
  s.L = L;

  Int m = 1;
  for (long i = 0; i < N; ++i) {
    long e = min_pow2_exponent(pow_int(m, pe.pn - pe.pd), pe.pd);
    Int h = pow2_int_bits(static_cast<unsigned long>(e));
    s.m.push_back(m);
    s.h.push_back(h);
    m = 2 * m * h;
    if (bits_of(m) > max_bits) return generate_log_tier(p, N, M, L);
  }

  const Int& hN = s.h.back();
  Int a = 2 * s.m.back() * hN;
  for (long k = 0; k < M; ++k) {
    Int b;
    for (;;) {
      Int t = pow_int(a, pe.pn - pe.pd);
      b = min_beta(t, hN, pe.pd);
      // The window [a^{p-1}/h_N, 2 a^{p-1}/h_N) only misses every integer
      // when a^{p-1} < h_N; doubling a repairs that.
      if (pow_int(b * hN, pe.pd) < t * pow2_int_bits(pe.pd)) break;
      a *= 2;
      if (bits_of(a) > max_bits) return generate_log_tier(p, N, M, L);
    }
    s.alpha.push_back(a);
    s.beta.push_back(b);
    a = 2 * a * L * b * hN;
    if (bits_of(a) > max_bits) return generate_log_tier(p, N, M, L);
  }

  check_sequences(s);
  return s;
}

ClassSpace::ClassSpace(TestSpaceParams params) : params_(std::move(params)) {
  check_sequences(params_.seq);
  if (params_.K < Scalar::one())
    throw std::invalid_argument("K must be at least 1");
  const SequenceSet& q = params_.seq;
  const size_t N = static_cast<size_t>(q.N);
  const size_t M = static_cast<size_t>(q.M);
  LogExp K = LogExp::from_scalar(params_.K);
  LogExp L = LogExp::from_rat(Rat(q.L));
  LogExp hN = q.h_last();

  ground_total_ = LogExp::zero();
  for (size_t i = 0; i < N; ++i) {
    gw_.push_back(q.m_val(i));
    gc_.push_back(q.h_val(i));
    gm_.push_back(gw_[i] * gc_[i]);
    ground_total_ = ground_total_ + gm_[i];
  }
  total_ = ground_total_;
  for (size_t k = 0; k < M; ++k) {
    hw_.push_back(K * q.alpha_val(k));
    hc_.push_back(L * q.beta_val(k) * hN);
    hm_.push_back(hw_[k] * hc_[k]);
    total_ = total_ + hm_[k];
  }

  // Weight dominance: these are what make single heavy points control the
  // averages (and hence the maximal operator) on these spaces.
  for (size_t k = 0; k < M; ++k)
    if (!(hw_[k] > ground_total_))
      throw std::invalid_argument("halo weight does not dominate ground mass");
  LogExp prefix = LogExp::zero();
  for (size_t i = 0; i < N; ++i) {
    if (!prefix.is_zero() && !(gw_[i] > prefix))
      throw std::invalid_argument("ground weight dominance violated");
    prefix = prefix + gm_[i];
  }
  prefix = LogExp::zero();
  for (size_t k = 0; k < M; ++k) {
    if (!prefix.is_zero() && !(hw_[k] > prefix))
      throw std::invalid_argument("halo weight dominance violated");
    prefix = prefix + hm_[k];
  }
}

LogExp ClassSpace::anchors_per_ground(size_t i, size_t k) const {
  return hc_.at(k) / gc_.at(i);
}

ClassFn ClassFn::zero(const ClassSpace& cs) {
  ClassFn f;
  f.ground.assign(static_cast<size_t>(cs.n_ground()), LogExp::zero());
  f.halo.assign(static_cast<size_t>(cs.n_halo()), LogExp::zero());
  return f;
}

ClassFn ClassFn::indicator_ground(const ClassSpace& cs, size_t i) {
  ClassFn f = zero(cs);
  f.ground.at(i) = LogExp::one();
  return f;
}

ClassFn ClassFn::indicator_halo(const ClassSpace& cs, size_t k) {
  ClassFn f = zero(cs);
  f.halo.at(k) = LogExp::one();
  return f;
}

ClassFn ClassFn::whole(const ClassSpace& cs) {
  ClassFn f;
  f.ground.assign(static_cast<size_t>(cs.n_ground()), LogExp::one());
  f.halo.assign(static_cast<size_t>(cs.n_halo()), LogExp::one());
  return f;
}

void check_shape(const ClassFn& f, const ClassSpace& cs) {
  if (f.ground.size() != static_cast<size_t>(cs.n_ground()) ||
      f.halo.size() != static_cast<size_t>(cs.n_halo()))
    throw std::invalid_argument("class function shape mismatch");
}

std::vector<std::pair<LogExp, LogExp>> class_distribution(
    const ClassFn& f, const ClassSpace& cs) {
  check_shape(f, cs);
  std::vector<std::pair<LogExp, LogExp>> vm;  // (value, class mass)
  for (size_t i = 0; i < f.ground.size(); ++i)
    if (!f.ground[i].is_zero()) vm.emplace_back(f.ground[i], cs.ground_mass(i));
  for (size_t k = 0; k < f.halo.size(); ++k)
    if (!f.halo[k].is_zero()) vm.emplace_back(f.halo[k], cs.halo_mass(k));
  std::sort(vm.begin(), vm.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<LogExp, LogExp>> steps;
  LogExp cum = LogExp::zero();
  for (size_t t = 0; t < vm.size(); ++t) {
    cum = cum + vm[t].second;
    if (t + 1 < vm.size() && vm[t + 1].first == vm[t].first) continue;
    steps.emplace_back(vm[t].first, cum);
  }
  return steps;
}

LogExp class_lorentz_norm(const ClassFn& f, const ClassSpace& cs, const Rat& p,
                          const ExtRat& q) {
  return lorentz_norm_steps<LogExp>(class_distribution(f, cs), p, q);
}

LogExp class_l1(const ClassFn& f, const ClassSpace& cs) {
  check_shape(f, cs);
  LogExp sum = LogExp::zero();
  for (size_t i = 0; i < f.ground.size(); ++i)
    sum = sum + f.ground[i] * cs.ground_mass(i);
  for (size_t k = 0; k < f.halo.size(); ++k)
    sum = sum + f.halo[k] * cs.halo_mass(k);
  return sum;
}

LogExp class_avg(const ClassFn& f, const ClassSpace& cs) {
  return class_l1(f, cs) / cs.total_mass();
}

ClassFn class_add(const ClassFn& a, const ClassFn& b) {
  if (a.ground.size() != b.ground.size() || a.halo.size() != b.halo.size())
    throw std::invalid_argument("class function shape mismatch");
  ClassFn out = a;
  for (size_t i = 0; i < out.ground.size(); ++i)
    out.ground[i] = out.ground[i] + b.ground[i];
  for (size_t k = 0; k < out.halo.size(); ++k)
    out.halo[k] = out.halo[k] + b.halo[k];
  return out;
}

ClassFn class_scale(const ClassFn& f, const LogExp& c) {
  ClassFn out = f;
  for (LogExp& v : out.ground) v = v * c;
  for (LogExp& v : out.halo) v = v * c;
  return out;
}

Int gamma(const ClassSpace& cs, size_t i, size_t k, const Int& l) {
  const SequenceSet& s = cs.seq();
  if (s.log_tier)
    throw std::domain_error(
        "anchor indexing needs literal counts; log-tier spaces only expose "
        "class-level data");
  if (i >= static_cast<size_t>(s.N) || k >= static_cast<size_t>(s.M))
    throw std::out_of_range("class index out of range");
  Int cnt = Int(s.L) * s.beta[k] * s.h[s.h.size() - 1];
  if (l < 1 || l > cnt) throw std::out_of_range("halo point index out of range");
  Int j;
  Int num = l * s.h[i];
  mpz_cdiv_q(j.get_mpz_t(), num.get_mpz_t(), cnt.get_mpz_t());
  return j;
}

ClassFn op_A_ki(const ClassSpace& cs, size_t k, size_t i, const ClassFn& f) {
  check_shape(f, cs);
  if (i >= f.ground.size() || k >= f.halo.size())
    throw std::out_of_range("class index out of range");
  ClassFn out = ClassFn::zero(cs);
  out.halo[k] = f.ground[i] * cs.ground_weight(i) / cs.halo_weight(k);
  return out;
}

ClassFn op_A(const ClassSpace& cs, const ClassFn& f) {
  check_shape(f, cs);
  LogExp sum = LogExp::zero();
  for (size_t i = 0; i < f.ground.size(); ++i)
    sum = sum + f.ground[i] * cs.ground_weight(i);
  ClassFn out = ClassFn::zero(cs);
  for (size_t k = 0; k < f.halo.size(); ++k)
    out.halo[k] = sum / cs.halo_weight(k);
  return out;
}

ClassFn op_Mtilde(const ClassSpace& cs, const ClassFn& f) {
  check_shape(f, cs);
  LogExp top = LogExp::zero();
  for (const LogExp& v : f.halo)
    if (v > top) top = v;
  ClassFn out = ClassFn::zero(cs);
  for (LogExp& v : out.ground) v = top;
  return out;
}

LogExp transfer_bracket(const ClassSpace& cs, size_t i, size_t k,
                        const Rat& p) {
  require_p(p);
  const SequenceSet& s = cs.seq();
  Rat inv_p = Rat(1) / p;
  return s.m_val(i).pow(1 - inv_p) * s.h_val(i).pow(-inv_p) *
         s.alpha_val(k).pow(inv_p - 1) * s.beta_val(k).pow(inv_p) *
         s.h_last().pow(inv_p);
}

LogExp transfer_factor(const ClassSpace& cs, size_t i, size_t k, const Rat& p) {
  Rat inv_p = Rat(1) / p;
  LogExp K = LogExp::from_scalar(cs.K());
  LogExp L = LogExp::from_rat(Rat(cs.seq().L));
  return K.pow(inv_p - 1) * L.pow(inv_p) * transfer_bracket(cs, i, k, p);
}

size_t ExplicitTestSpace::ground_point(size_t i, long j) const {
  if (i >= ground_off.size() || j < 0 || j >= ground_cnt[i])
    throw std::out_of_range("ground point index out of range");
  return ground_off[i] + static_cast<size_t>(j);
}

size_t ExplicitTestSpace::halo_point(size_t k, long l) const {
  if (k >= halo_off.size() || l < 0 || l >= halo_cnt[k])
    throw std::out_of_range("halo point index out of range");
  return halo_off[k] + static_cast<size_t>(l);
}

long ExplicitTestSpace::anchor_of(size_t k, long l, size_t i) const {
  if (k >= halo_off.size() || l < 0 || l >= halo_cnt[k])
    throw std::out_of_range("halo point index out of range");
  if (i >= ground_off.size()) throw std::out_of_range("ground class out of range");
  long hi = ground_cnt[i];
  long cnt = halo_cnt[k];
  // 1-based ceil(l1 * h_i / cnt), shifted back to 0-based.
  long l1 = l + 1;
  return (l1 * hi + cnt - 1) / cnt - 1;
}

Fn ExplicitTestSpace::class_to_fn(const ClassFn& f) const {
  Fn out = Fn::zero(space.size());
  for (size_t i = 0; i < ground_off.size(); ++i)
    for (long j = 0; j < ground_cnt[i]; ++j)
      out.values[ground_point(i, j)] = f.ground.at(i).to_scalar();
  for (size_t k = 0; k < halo_off.size(); ++k)
    for (long l = 0; l < halo_cnt[k]; ++l)
      out.values[halo_point(k, l)] = f.halo.at(k).to_scalar();
  return out;
}

Fn ExplicitTestSpace::indicator_ground(size_t i) const {
  Fn out = Fn::zero(space.size());
  for (long j = 0; j < ground_cnt.at(i); ++j)
    out.values[ground_point(i, j)] = Scalar::one();
  return out;
}

ExplicitTestSpace build_explicit(const TestSpaceParams& params,
                                 size_t max_points) {
  check_sequences(params.seq);
  const SequenceSet& s = params.seq;
  if (s.log_tier)
    throw std::domain_error(
        "log-tier sequences cannot be materialized; use the class tier");
  if (params.K < Scalar::one())
    throw std::invalid_argument("K must be at least 1");

  std::vector<long> gcnt, hcnt;
  size_t total = 0;
  for (const Int& h : s.h) {
    if (!h.fits_slong_p()) throw std::length_error("explicit tier cap exceeded; use the class tier");
    gcnt.push_back(h.get_si());
    total += static_cast<size_t>(h.get_si());
  }
  const Int& hN = s.h.back();
  for (const Int& b : s.beta) {
    Int c = Int(s.L) * b * hN;
    if (!c.fits_slong_p()) throw std::length_error("explicit tier cap exceeded; use the class tier");
    hcnt.push_back(c.get_si());
    total += static_cast<size_t>(c.get_si());
  }
  if (total > max_points)
    throw std::length_error("explicit tier cap exceeded; use the class tier");

  std::vector<Scalar> weights;
  std::vector<std::string> labels;
  weights.reserve(total);
  labels.reserve(total);
  std::vector<size_t> goff, hoff;
  for (size_t i = 0; i < gcnt.size(); ++i) {
    goff.push_back(weights.size());
    Scalar w = Scalar::from_rat(Rat(s.m[i]));
    for (long j = 0; j < gcnt[i]; ++j) {
      weights.push_back(w);
      std::ostringstream lbl;
      lbl << "x" << i + 1 << "," << j + 1;
      labels.push_back(lbl.str());
    }
  }
  for (size_t k = 0; k < hcnt.size(); ++k) {
    hoff.push_back(weights.size());
    Scalar w = params.K * Scalar::from_rat(Rat(s.alpha[k]));
    for (long l = 0; l < hcnt[k]; ++l) {
      weights.push_back(w);
      std::ostringstream lbl;
      lbl << "o" << k + 1 << "," << l + 1;
      labels.push_back(lbl.str());
    }
  }

  Space sp(std::move(weights), std::move(labels));
  const Rat two(2);
  for (size_t a = 0; a + 1 < total; ++a)
    for (size_t b = a + 1; b < total; ++b) sp.set_dist(a, b, two);

  ExplicitTestSpace ts{params, std::move(sp), std::move(goff), std::move(hoff),
                       std::move(gcnt), std::move(hcnt)};
  const Rat one(1);
  for (size_t k = 0; k < ts.halo_cnt.size(); ++k)
    for (long l = 0; l < ts.halo_cnt[k]; ++l)
      for (size_t i = 0; i < ts.ground_cnt.size(); ++i)
        ts.space.set_dist(ts.ground_point(i, ts.anchor_of(k, l, i)),
                          ts.halo_point(k, l), one);
  ts.space.freeze();
  return ts;
}

Fn op_A_ki(const ExplicitTestSpace& ts, size_t k, size_t i, const Fn& f) {
  if (f.values.size() != ts.space.size())
    throw std::invalid_argument("function size does not match space");
  Fn out = Fn::zero(ts.space.size());
  for (long l = 0; l < ts.halo_cnt.at(k); ++l) {
    size_t x = ts.halo_point(k, l);
    size_t anchor = ts.ground_point(i, ts.anchor_of(k, l, i));
    out.values[x] =
        f.values[anchor] * ts.space.weight(anchor) / ts.space.weight(x);
  }
  return out;
}

Fn op_A(const ExplicitTestSpace& ts, const Fn& f) {
  if (f.values.size() != ts.space.size())
    throw std::invalid_argument("function size does not match space");
  Fn out = Fn::zero(ts.space.size());
  for (size_t k = 0; k < ts.halo_cnt.size(); ++k)
    for (long l = 0; l < ts.halo_cnt[k]; ++l) {
      size_t x = ts.halo_point(k, l);
      Scalar sum = Scalar::zero();
      for (size_t i = 0; i < ts.ground_cnt.size(); ++i) {
        size_t anchor = ts.ground_point(i, ts.anchor_of(k, l, i));
        sum = sum + f.values[anchor] * ts.space.weight(anchor);
      }
      out.values[x] = sum / ts.space.weight(x);
    }
  return out;
}

Fn op_Mtilde(const ExplicitTestSpace& ts, const Fn& f) {
  if (f.values.size() != ts.space.size())
    throw std::invalid_argument("function size does not match space");
  Scalar top = Scalar::zero();
  for (size_t k = 0; k < ts.halo_cnt.size(); ++k)
    for (long l = 0; l < ts.halo_cnt[k]; ++l) {
      const Scalar& v = f.values[ts.halo_point(k, l)];
      if (v > top) top = v;
    }
  Fn out = Fn::zero(ts.space.size());
  for (size_t i = 0; i < ts.ground_cnt.size(); ++i)
    for (long j = 0; j < ts.ground_cnt[i]; ++j)
      out.values[ts.ground_point(i, j)] = top;
  return out;
}

std::vector<Witness> witness_functions(const ClassSpace& cs, const Rat& p) {
  require_p(p);
  const size_t N = static_cast<size_t>(cs.n_ground());
  const size_t M = static_cast<size_t>(cs.n_halo());
  const size_t T = N + M;
  std::vector<Witness> out;

  ClassFn layered = ClassFn::zero(cs);
  for (size_t i = 0; i < N; ++i)
    layered.ground[i] = cs.ground_mass(i).pow(Rat(-1) / p);
  out.push_back({"layered", std::move(layered)});

  auto label = [&](size_t t) {
    std::ostringstream o;
    if (t < N)
      o << "S" << t + 1;
    else
      o << "H" << t - N + 1;
    return o.str();
  };
  for (size_t a = 0; a < T; ++a)
    for (size_t b = a; b < T; ++b) {
      ClassFn f = ClassFn::zero(cs);
      for (size_t t = a; t <= b; ++t) {
        if (t < N)
          f.ground[t] = LogExp::one();
        else
          f.halo[t - N] = LogExp::one();
      }
      std::string name;
      if (a == 0 && b == T - 1)
        name = "all";
      else if (a == b)
        name = label(a);
      else
        name = label(a) + ".." + label(b);
      out.push_back({std::move(name), std::move(f)});
    }
  return out;
}

std::vector<WitnessRatio> witness_suite(const ClassSpace& cs, const Rat& p,
                                        const ExtRat& q, const ExtRat& r) {
  require_p(p);
  require_index(q);
  require_index(r);
  std::vector<WitnessRatio> out;
  for (const Witness& w : witness_functions(cs, p)) {
    ClassFn mw = maximal_fn_classes(cs, w.fn);
    LogExp num = class_lorentz_norm(mw, cs, p, r);
    LogExp den = class_lorentz_norm(w.fn, cs, p, q);
    out.push_back({w.name, num / den});
  }
  return out;
}

TestSpaceParams scaled_family_params(const Rat& p, const Rat& lambda, long a,
                                     long b, long kappa, long L_override) {
  require_p(p);
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (a < 1 || b < 1 || kappa < 1)
    throw std::invalid_argument("a, b and kappa must be positive integers");
  PExp pe = split_p(p);

  Int Nz = pow_int(Int(kappa), static_cast<unsigned long>(b));
  Int Mz = pow_int(Int(kappa), static_cast<unsigned long>(a));
  if (Nz > 1000000 || Mz > 1000000)
    throw std::invalid_argument("family too large");
  long N = Nz.get_si();
  long M = Mz.get_si();

  // x = lambda * kappa^{-b}; L = min{ L >= 1 : L^{pd} >= x^{pn} }.
  Rat x = lambda * pow_rat(Rat(kappa), -b);
  Rat xp = pow_rat(x, static_cast<long>(pe.pn));
  long L = 1;
  while (Rat(pow_int(Int(L), pe.pd)) < xp) ++L;
  if (L_override > 0) {
    if (Rat(pow_int(Int(L_override), pe.pd)) < xp)
      throw std::invalid_argument("L override would force K below 1");
    L = L_override;
  }

  Rat pm1 = p - 1;
  Scalar K = Scalar::rat_pow(Rat(L), Rat(1) / pm1) *
             Scalar::rat_pow(x, -p / pm1);
  if (K < Scalar::one())
    throw std::invalid_argument("K must be at least 1");

  TestSpaceParams out;
  out.seq = generate_sequences(p, N, M, L);
  out.K = K;
  return out;
}

Scalar model_norm(const Rat& p, const ExtRat& q, const ExtRat& r,
                  const Rat& lambda, long a, long b, long kappa) {
  require_p(p);
  require_index(q);
  require_index(r);
  if (!(q <= r)) throw std::invalid_argument("model needs q <= r");
  if (lambda < 0) throw std::invalid_argument("lambda must be nonnegative");
  if (kappa < 1) throw std::invalid_argument("kappa must be positive");
  Rat e(0);
  if (!r.infinite) e += Rat(a) / r.value;
  if (!q.infinite) e -= Rat(b) / q.value;
  Scalar term = Scalar::rat_pow(Rat(kappa), e).mul_rat(lambda);
  return Scalar::one() + term;
}

}  // namespace lml
