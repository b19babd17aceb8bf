#include "lml/sampling.hpp"

namespace lml {

Space sample_band_space(std::mt19937_64& rng, size_t max_points) {
  if (max_points < 2) throw std::invalid_argument("need at least two points");
  size_t n = 2 + rng() % (max_points - 1);
  std::vector<Scalar> weights;
  weights.reserve(n);
  for (size_t i = 0; i < n; ++i)
    weights.push_back(Scalar::from_rat(
        rat(1 + static_cast<long>(rng() % 12), 1 + static_cast<long>(rng() % 4))));
  Space space(std::move(weights));
  const Rat band[3] = {rat(1), rat(3, 2), rat(2)};
  for (size_t j = 1; j < n; ++j)
    for (size_t i = 0; i < j; ++i) space.set_dist(i, j, band[rng() % 3]);
  space.freeze();
  return space;
}

Fn sample_fn(const Space& space, std::mt19937_64& rng, unsigned zero_in) {
  Fn f = Fn::zero(space.size());
  for (size_t i = 0; i < space.size(); ++i) {
    if (zero_in > 0 && rng() % zero_in == 0) continue;
    long e = static_cast<long>(rng() % 7) - 3;
    f.values[i] = Scalar::from_rat(
        pow_rat(Rat(2), e) * rat(1 + static_cast<long>(rng() % 15), 8));
  }
  return f;
}

}  // namespace lml
