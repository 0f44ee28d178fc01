#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lotto/types.hpp"

namespace lotto {

/// Outcome of an exact resource tie x_A + p_b == q * x_B on a battlefield.
/// CoinFlip awards each side half the value; the one-sided rules award all
/// of it. The continuum game is tie-rule independent; CoinFlip cancels the
/// grid's tie bias to first order and is the default.
enum class TieRule { CoinFlip, BWins, AWins };

/// How per-player allocation caps are chosen: Kappa derives them from the
/// solved equilibrium support bounds (falls back to Budget when kappas are
/// unavailable, e.g. R_A = 0); Budget uses 2*(P + R_A + qR_B) for both.
enum class CapPolicy { Kappa, Budget };

enum class Player { A, B };

/// Kernel selection for the best-response scans.
enum class Exec { Auto, Serial, Parallel };

/// Finite restriction of the Stage-2 game: each player's pure strategies
/// are all vectors over the grid {0, delta, ..., (levels-1)*delta}^n.
/// Pure strategies are addressed by a mixed-radix index (battlefield 0 is
/// the least significant digit).
struct DiscretizedGame {
  GameInstance instance;
  PreAllocation p;
  double delta = 0.0;
  double x_max_A = 0.0;
  double x_max_B = 0.0;
  int levels_A = 0;
  int levels_B = 0;
  std::int64_t count_A = 0;  // levels_A^n
  std::int64_t count_B = 0;
  TieRule ties = TieRule::CoinFlip;

  int levels(Player who) const { return who == Player::A ? levels_A : levels_B; }
  std::int64_t count(Player who) const { return who == Player::A ? count_A : count_B; }
  double budget(Player who) const {
    return who == Player::A ? instance.RA : instance.RB;
  }
  int digit(std::int64_t index, int b, Player who) const;
  double cost(std::int64_t index, Player who) const;
};

/// Sparse distribution over pure-strategy indices, sorted by index.
struct MixedStrategy {
  std::vector<std::pair<std::uint32_t, double>> entries;
  double expected_cost = 0.0;
};

struct BestResponse {
  double value = 0.0;
  MixedStrategy strategy;  // support of at most two pure strategies
};

/// Equilibrium certificate: gap = BR_A(sigma_B) + BR_B(sigma_A) - W bounds
/// |value - discretized game value| regardless of how the strategies were
/// produced, because both best responses are computed exactly.
struct SaddleCertificate {
  double value = 0.0;
  MixedStrategy sigma_A;
  MixedStrategy sigma_B;
  double gap = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

/// Builds the grid game. Enforces n <= 3 and per-player pure-strategy
/// counts <= 1e5 (TooLarge), delta > 0 (InvalidStep).
DiscretizedGame build_discretized(const GameInstance& inst,
                                  const PreAllocation& p, double delta,
                                  CapPolicy policy = CapPolicy::Kappa,
                                  TieRule ties = TieRule::CoinFlip);

/// Exact best response under the expected-budget constraint: solves
/// min_{lambda >= 0} [lambda * budget + max_x (u(x) - lambda * cost(x))]
/// over the finitely many dual breakpoints (equivalently, evaluates the
/// upper concave envelope of the (cost, utility) cloud at the budget).
BestResponse best_response(const DiscretizedGame& game,
                           const MixedStrategy& opponent, Player who,
                           Exec exec = Exec::Auto);

/// Expected payoff to A of a strategy profile.
double expected_payoff_A(const DiscretizedGame& game,
                         const MixedStrategy& sigma_A,
                         const MixedStrategy& sigma_B);

/// Fictitious play with exact best responses; stops once gap <= epsilon.
/// Deterministic for a fixed seed (the seed only picks the starting pure
/// strategies). Returns the best certificate found, flagged not converged
/// when the gap criterion was not met within max_iters.
SaddleCertificate solve_saddle(const DiscretizedGame& game, double epsilon,
                               std::int64_t max_iters, std::uint64_t seed,
                               Exec exec = Exec::Auto);

}  // namespace lotto
