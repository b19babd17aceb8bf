#include "lml/maximal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lml/lorentz.hpp"

namespace lml {

MaximalEvaluator::MaximalEvaluator(const Space& space) : space_(space) {
  if (!space.frozen())
    throw std::logic_error("maximal evaluator needs a frozen space");
  const size_t n = space.size();
  order_.resize(n);
  cut_.resize(n);
  for (size_t c = 0; c < n; ++c) {
    std::vector<uint32_t>& ord = order_[c];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), 0u);
    std::sort(ord.begin(), ord.end(), [&](uint32_t a, uint32_t b) {
      return space.dist(c, a) < space.dist(c, b);
    });
    for (size_t t = 1; t < n; ++t)
      if (space.dist(c, ord[t]) != space.dist(c, ord[t - 1]))
        cut_[c].push_back(static_cast<uint32_t>(t));
    cut_[c].push_back(static_cast<uint32_t>(n));
  }
}

Fn MaximalEvaluator::apply(const Fn& f) const {
  const size_t n = space_.size();
  if (f.values.size() != n)
    throw std::invalid_argument("function size does not match space");
  Fn out = Fn::zero(n);
  for (size_t c = 0; c < n; ++c) {
    const std::vector<uint32_t>& ord = order_[c];
    Scalar num = Scalar::zero();
    Scalar den = Scalar::zero();
    Scalar best = Scalar::zero();
    size_t t = 0;
    for (uint32_t cut : cut_[c]) {
      for (; t < cut; ++t) {
        const uint32_t y = ord[t];
        num = num + f.values[y] * space_.weight(y);
        den = den + space_.weight(y);
      }
      Scalar avg = num / den;
      if (avg > best) best = avg;
    }
    out.values[c] = best;
  }
  return out;
}

Fn maximal_fn(const Fn& f, const Space& space) {
  return MaximalEvaluator(space).apply(f);
}

ClassFn maximal_fn_classes(const ClassSpace& cs, const ClassFn& cf) {
  check_shape(cf, cs);
  const long n = cs.n_ground();
  const long m = cs.n_halo();
  const LogExp global = class_avg(cf, cs);

  // Shared across ground classes: sum_i f_i m_i and sum_i m_i.
  LogExp ground_fw = LogExp::zero();
  LogExp ground_w = LogExp::zero();
  for (long i = 0; i < n; ++i) {
    ground_fw = ground_fw + cf.ground[i] * cs.ground_weight(i);
    ground_w = ground_w + cs.ground_weight(i);
  }

  ClassFn out = ClassFn::zero(cs);
  for (long i = 0; i < n; ++i) {
    // Ball of radius in (1,2]: the point plus every halo point anchored to
    // it, c_ik = L beta_k h_N / h_i of them per halo class.
    LogExp num = cf.ground[i] * cs.ground_weight(i);
    LogExp den = cs.ground_weight(i);
    for (long k = 0; k < m; ++k) {
      LogExp cw = cs.anchors_per_ground(i, k) * cs.halo_weight(k);
      num = num + cf.halo[k] * cw;
      den = den + cw;
    }
    LogExp best = cf.ground[i];
    LogExp mid = num / den;
    if (mid > best) best = mid;
    if (global > best) best = global;
    out.ground[i] = best;
  }
  for (long k = 0; k < m; ++k) {
    // Ball of radius in (1,2]: the halo point plus its one anchor in each
    // ground class.
    LogExp num = cf.halo[k] * cs.halo_weight(k) + ground_fw;
    LogExp den = cs.halo_weight(k) + ground_w;
    LogExp best = cf.halo[k];
    LogExp mid = num / den;
    if (mid > best) best = mid;
    if (global > best) best = global;
    out.halo[k] = best;
  }
  return out;
}

bool sandwich_check(const ExplicitTestSpace& ts, const Fn& f, const Fn& mf) {
  const Space& sp = ts.space;
  if (f.values.size() != sp.size() || mf.values.size() != sp.size())
    throw std::invalid_argument("function size does not match space");
  Fn af = op_A(ts, f);
  Fn mt = op_Mtilde(ts, f);
  Fn avg = avg_fn(f, sp);
  const Rat slack = rat(1000000000001L, 1000000000000L);
  const Rat two_s = Rat(2) * slack;
  for (size_t x = 0; x < sp.size(); ++x) {
    if (af.values[x] > mf.values[x].mul_rat(two_s)) return false;
    Scalar cap = f.values[x].mul_rat(2);
    Scalar c2 = af.values[x].mul_rat(4);
    if (c2 > cap) cap = c2;
    Scalar c3 = mt.values[x].mul_rat(2);
    if (c3 > cap) cap = c3;
    if (avg.values[x] > cap) cap = avg.values[x];
    if (mf.values[x] > cap.mul_rat(slack)) return false;
  }
  return true;
}

}  // namespace lml
