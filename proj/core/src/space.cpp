#include "lml/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace lml {

Space::Space(std::vector<Scalar> weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.empty()) throw std::invalid_argument("empty space");
  for (const Scalar& w : weights_)
    if (w.is_zero()) throw std::invalid_argument("weights must be positive");
  if (labels_.empty()) {
    labels_.reserve(weights_.size());
    for (size_t i = 0; i < weights_.size(); ++i)
      labels_.push_back("p" + std::to_string(i));
  } else if (labels_.size() != weights_.size()) {
    throw std::invalid_argument("label count does not match point count");
  }
  code_.assign(weights_.size() * (weights_.size() - 1) / 2, 0);
  codebook_.push_back(Rat(0));
  code_of_[Rat(0)] = 0;
}

size_t Space::tri_index(size_t i, size_t j) const {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

void Space::check_point(size_t i) const {
  if (i >= weights_.size()) throw std::out_of_range("unknown point id");
}

void Space::set_dist(size_t i, size_t j, const Rat& d) {
  if (frozen_) throw std::logic_error("space is frozen");
  check_point(i);
  check_point(j);
  if (i == j) {
    if (d != 0) throw std::invalid_argument("nonzero distance on the diagonal");
    return;
  }
  if (d <= 0) throw std::invalid_argument("distances between distinct points must be positive");
  auto [it, fresh] = code_of_.try_emplace(d, codebook_.size());
  if (fresh) {
    if (codebook_.size() > UINT16_MAX)
      throw std::overflow_error("too many distinct distances");
    codebook_.push_back(d);
  }
  code_[tri_index(i, j)] = it->second;
}

void Space::freeze() {
  if (frozen_) return;
  const size_t n = size();
  for (size_t j = 1; j < n; ++j)
    for (size_t i = 0; i < j; ++i)
      if (code_[tri_index(i, j)] == 0)
        throw std::invalid_argument(
            "zero distance between distinct points (distance never set?)");

  // Triangle inequality (vacuous for a single point, where no distance was
  // ever set). If every distance lies within a factor two band,
  // d(i,k) <= 2 min <= d(i,j) + d(j,k) holds outright; the spaces generated
  // here use distances {1, 2} plus a few larger glue values, so the full
  // cubic check only runs for glued spaces and stays cheap via a precomputed
  // violation table over the (tiny) codebook.
  Rat dmin = codebook_.size() > 1 ? codebook_[1] : Rat(0);
  Rat dmax = dmin;
  for (size_t c = 2; c < codebook_.size(); ++c) {
    dmin = std::min(dmin, codebook_[c]);
    dmax = std::max(dmax, codebook_[c]);
  }
  if (dmax > 2 * dmin) {
    const size_t m = codebook_.size();
    std::vector<bool> bad(m * m * m, false);
    for (size_t a = 1; a < m; ++a)
      for (size_t b = 1; b < m; ++b) {
        Rat sum = codebook_[a] + codebook_[b];
        for (size_t c = 1; c < m; ++c)
          bad[(a * m + b) * m + c] = codebook_[c] > sum;
      }
    for (size_t i = 0; i < n; ++i)
      for (size_t k = i + 1; k < n; ++k) {
        const uint16_t c = code_[tri_index(i, k)];
        for (size_t j = 0; j < n; ++j) {
          if (j == i || j == k) continue;
          const size_t a = code_[tri_index(i, j)];
          const size_t b = code_[tri_index(j, k)];
          if (bad[(a * m + b) * m + c])
            throw std::invalid_argument(
                "triangle inequality violated at points " + labels_[i] + ", " +
                labels_[j] + ", " + labels_[k]);
        }
      }
  }

  total_ = Scalar::zero();
  for (const Scalar& w : weights_) total_ = total_ + w;
  frozen_ = true;
}

const Rat& Space::dist(size_t i, size_t j) const {
  check_point(i);
  check_point(j);
  if (i == j) return codebook_[0];
  return codebook_[code_[tri_index(i, j)]];
}

uint16_t Space::dist_code(size_t i, size_t j) const {
  check_point(i);
  check_point(j);
  if (i == j) return 0;
  return code_[tri_index(i, j)];
}

std::optional<size_t> Space::find_label(const std::string& l) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return i;
  return std::nullopt;
}

std::vector<size_t> Space::ball(size_t center, const Rat& radius) const {
  check_point(center);
  if (radius <= 0) throw std::invalid_argument("ball radius must be positive");
  std::vector<size_t> out;
  for (size_t y = 0; y < size(); ++y)
    if (dist(center, y) < radius) out.push_back(y);
  return out;
}

Scalar Space::measure_of(const std::vector<size_t>& pts) const {
  Scalar m = Scalar::zero();
  for (size_t i : pts) {
    check_point(i);
    m = m + weights_[i];
  }
  return m;
}

const Scalar& Space::total_measure() const {
  if (!frozen_) throw std::logic_error("space is not frozen");
  return total_;
}

Fn Fn::indicator(size_t n, const std::vector<size_t>& support) {
  Fn f = zero(n);
  for (size_t i : support) {
    if (i >= n) throw std::out_of_range("unknown point id");
    f.values[i] = Scalar::one();
  }
  return f;
}

std::vector<size_t> Fn::support() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < values.size(); ++i)
    if (!values[i].is_zero()) out.push_back(i);
  return out;
}

StepFn distribution(const Fn& f, const Space& space) {
  if (f.values.size() != space.size())
    throw std::invalid_argument("function does not match space");
  std::vector<size_t> idx = f.support();
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return f.values[a].cmp(f.values[b]) > 0;
  });
  StepFn d;
  Scalar cum = Scalar::zero();
  size_t i = 0;
  while (i < idx.size()) {
    const Scalar& v = f.values[idx[i]];
    Scalar mass = Scalar::zero();
    size_t j = i;
    while (j < idx.size() && f.values[idx[j]].cmp(v) == 0) {
      mass = mass + space.weight(idx[j]);
      ++j;
    }
    cum = cum + mass;
    d.steps.push_back({v, cum});
    i = j;
  }
  return d;
}

Scalar StepFn::at(const Scalar& t) const {
  if (t.is_zero()) throw std::domain_error("distribution argument must be positive");
  // Smallest threshold >= t; thresholds decrease, so scan from the back.
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    if (it->threshold.cmp(t) >= 0) return it->mass;
  return Scalar::zero();
}

}  // namespace lml
