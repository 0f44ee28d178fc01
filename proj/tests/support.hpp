#pragma once

#include <random>
#include <vector>

#include "lotto/types.hpp"

namespace lotto::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline GameInstance random_instance(Rng& rng, int n) {
  std::vector<double> w(n);
  for (double& x : w) x = uniform(rng, 0.2, 2.5);
  const double q = uniform(rng, 0.25, 4.0);
  const double P = uniform(rng, 0.0, 2.0);
  const double RA = uniform(rng, 0.05, 3.0);
  const double RB = uniform(rng, 0.05, 3.0);
  return make_instance(std::move(w), q, P, RA, RB);
}

// uniform-ish point on the scaled simplex (normalized exponentials)
inline PreAllocation random_preallocation(Rng& rng, const GameInstance& inst) {
  std::exponential_distribution<double> exp_draw(1.0);
  std::vector<double> p(inst.n);
  double s = 0.0;
  for (double& x : p) {
    x = exp_draw(rng);
    s += x;
  }
  for (double& x : p) x = x / s * inst.P;
  return make_preallocation(inst, p);
}

inline double rel_err(double got, double want) {
  const double scale = std::abs(want) > 1.0 ? std::abs(want) : 1.0;
  return std::abs(got - want) / scale;
}

}  // namespace lotto::test
