#pragma once

#include <random>

#include "lml/space.hpp"

namespace lml {

// Random test space: 2..max_points points, small rational weights, distances
// drawn from {1, 3/2, 2}. Any metric taking values in a factor-two band
// satisfies the triangle inequality outright, so these are always valid.
// All randomness uses rng() % n so runs are byte-reproducible.
Space sample_band_space(std::mt19937_64& rng, size_t max_points);

// Random nonnegative function: zero with probability 1/zero_in, otherwise a
// dyadic scale times a small rational.
Fn sample_fn(const Space& space, std::mt19937_64& rng, unsigned zero_in = 4);

}  // namespace lml
