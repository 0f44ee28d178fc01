#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lotto/types.hpp"

namespace lotto {

/// Aggregates of a candidate partition that feed the kappa formulas.
/// C1 = R_A + P1, C2 = qR_B - P2, H1 = C1^2 - W1*norm1, H2 = C2^2 + W2*norm1,
/// where norm1 = sum_{b in B1} p_b^2/w_b.
struct PartitionQuantities {
  double W1 = 0.0, W2 = 0.0;
  double P1 = 0.0, P2 = 0.0;
  double norm1 = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double H1 = 0.0, H2 = 0.0;
};

enum class InfeasibleReason {
  None,
  NegativeDiscriminant,   // H1*H2 < 0 beyond rounding residue
  NonPositiveKappa,
  B0ConditionViolated,    // some b in B0 fails p_b >= q*w_b*kB
  B1ConditionViolated,    // some b in B1 fails 0 < q*w_b*kB - p_b <= w_b*kA
  B2ConditionViolated,    // some b in B2 fails q*w_b*kB - p_b > w_b*kA
  NoContestedBattlefield, // B1 and B2 both empty
};

const char* infeasible_reason_name(InfeasibleReason r);

/// Outcome of solving the budget system restricted to one partition:
/// either a positive kappa pair passing the self-consistency checks, or
/// the first failed condition with the offending battlefield (-1 if none).
struct PartitionSolveResult {
  std::optional<KappaPair> kappa;
  InfeasibleReason reason = InfeasibleReason::None;
  int battlefield = -1;

  bool feasible() const { return kappa.has_value(); }
};

/// Solved Stage-2 game: kappas, the active partition, the equilibrium
/// payoff, and the absolute budget-system defects (residual_X relative to
/// R_X stays below 1e-9 for any returned equilibrium).
struct GlfEquilibrium {
  KappaPair kappa;
  Partition partition;
  Payoff payoff;
  double residual_A = 0.0;
  double residual_B = 0.0;
};

/// h_b(kappa) = min(q*w_b*kappa_B, w_b*kappa_A + p_b).
double h_value(const GameInstance& inst, const PreAllocation& p,
               const KappaPair& kappa, int b);

/// Absolute defects of the two budget identities:
///   |sum_b (h_b - p_b)^2 / (2 q w_b kappa_B) - R_A| and
///   |sum_b (h_b^2 - p_b^2) / (2 q w_b kappa_A) - R_B|.
/// Battlefields with a nonpositive margin h_b - p_b carry no equilibrium
/// spend for either player, so their terms are clamped to zero; on any
/// solution without outright wins this is the plain two-equation system.
std::pair<double, double> soe_residual(const GameInstance& inst,
                                       const PreAllocation& p,
                                       const KappaPair& kappa);

PartitionQuantities partition_quantities(const GameInstance& inst,
                                         const PreAllocation& p,
                                         const Partition& part);

PartitionSolveResult solve_partition(const GameInstance& inst,
                                     const PreAllocation& p,
                                     const Partition& part);

/// Equilibrium payoff from a solved kappa pair (per-battlefield sums over
/// the partition).
Payoff payoff_from_kappa(const GameInstance& inst, const PreAllocation& p,
                         const KappaPair& kappa, const Partition& part);

/// Solves the Stage-2 game for an arbitrary pre-allocation. Enumerates the
/// threshold partitions in descending p_b/w_b order: a prefix B0 of
/// outright wins, then B1, then B2 (ratio ties are grouped first, split
/// only if grouping is infeasible), and picks the feasible candidate with
/// the smallest residual. Throws ZeroBudget when R_A or R_B is 0 and
/// NoFeasiblePartition if no candidate passes (unreachable for valid
/// inputs).
GlfEquilibrium solve_glf(const GameInstance& inst, const PreAllocation& p);

/// Exhaustive variant trying all 3^n battlefield assignments (n <= 8);
/// returns every feasible one. Test support for validating the threshold
/// enumeration.
std::vector<std::pair<Partition, KappaPair>> feasible_partitions_exhaustive(
    const GameInstance& inst, const PreAllocation& p);

}  // namespace lotto
