#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lotto/errors.hpp"

namespace lotto {

/// One game instance: n battlefields with values w, effectiveness q of B's
/// resources, A's pre-allocated budget P, and real-time budgets R_A, R_B.
/// W caches sum(w). Immutable after construction; build via make_instance.
struct GameInstance {
  std::vector<double> w;
  double q = 1.0;
  double P = 0.0;
  double RA = 0.0;
  double RB = 0.0;
  double W = 0.0;  // sum of w, cached at construction
  int n = 0;
};

/// A's Stage-1 deployment: p >= 0 with sum(p) = P (simplex tolerance
/// 1e-12 * max(1, P)).
struct PreAllocation {
  std::vector<double> p;
};

/// Zero-sum split of the total value W; value_B = W - value_A by construction.
struct Payoff {
  double value_A = 0.0;
  double value_B = 0.0;
};

struct KappaPair {
  double kappa_A = 0.0;
  double kappa_B = 0.0;
  double q_kappa_B(double q) const { return q * kappa_B; }
};

/// Battlefield split driven by which arm of h_b is active: B1 holds the
/// min = q*w_b*kappa_B arm (the high p_b/w_b ratios), B2 the rest. B0 is
/// the degenerate edge of B1 where p_b >= q*w_b*kappa_B: the head start
/// alone deters B, A collects w_b outright and neither player spends
/// real-time resources there. Empty at the proportional pre-allocation.
struct Partition {
  std::vector<int> b0;
  std::vector<int> b1;
  std::vector<int> b2;
};

GameInstance make_instance(std::vector<double> w, double q, double P,
                           double RA, double RB);

PreAllocation make_preallocation(const GameInstance& inst,
                                 std::vector<double> p);

/// p*_b = (P/W) * w_b, the payoff-maximizing Stage-1 deployment.
PreAllocation proportional_preallocation(const GameInstance& inst);

/// sum_b p_b^2 / w_b. Minimized over the simplex by the proportional
/// pre-allocation, where it equals P^2/W.
double weighted_norm_sq(const GameInstance& inst, const PreAllocation& p);

Payoff make_payoff(double W, double value_A);

inline double simplex_tolerance(double P) {
  return 1e-12 * (P > 1.0 ? P : 1.0);
}

}  // namespace lotto
