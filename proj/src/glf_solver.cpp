#include "lotto/glf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

namespace lotto {

namespace {

// Feasibility slack for the per-battlefield arm conditions; keeps exact
// regime-boundary instances from rounding into "no feasible partition".
double condition_slack(double a, double b) {
  double m = 1.0;
  if (std::abs(a) > m) m = std::abs(a);
  if (std::abs(b) > m) m = std::abs(b);
  return 1e-12 * m;
}

PartitionSolveResult check_conditions(const GameInstance& inst,
                                      const PreAllocation& p,
                                      const Partition& part, KappaPair kappa) {
  if (!(kappa.kappa_A > 0.0) || !(kappa.kappa_B > 0.0) ||
      !std::isfinite(kappa.kappa_A) || !std::isfinite(kappa.kappa_B))
    return {std::nullopt, InfeasibleReason::NonPositiveKappa, -1};
  for (int b : part.b0) {
    const double t = inst.q * inst.w[b] * kappa.kappa_B;
    if (!(p.p[b] >= t - condition_slack(t, p.p[b])))
      return {std::nullopt, InfeasibleReason::B0ConditionViolated, b};
  }
  for (int b : part.b1) {
    const double t = inst.q * inst.w[b] * kappa.kappa_B - p.p[b];
    const double cap = inst.w[b] * kappa.kappa_A;
    if (!(t > 0.0) || t > cap + condition_slack(t, cap))
      return {std::nullopt, InfeasibleReason::B1ConditionViolated, b};
  }
  for (int b : part.b2) {
    const double t = inst.q * inst.w[b] * kappa.kappa_B - p.p[b];
    const double cap = inst.w[b] * kappa.kappa_A;
    if (!(t > cap - condition_slack(t, cap)))
      return {std::nullopt, InfeasibleReason::B2ConditionViolated, b};
  }
  return {kappa, InfeasibleReason::None, -1};
}

}  // namespace

const char* infeasible_reason_name(InfeasibleReason r) {
  switch (r) {
    case InfeasibleReason::None: return "None";
    case InfeasibleReason::NegativeDiscriminant: return "NegativeDiscriminant";
    case InfeasibleReason::NonPositiveKappa: return "NonPositiveKappa";
    case InfeasibleReason::B0ConditionViolated: return "B0ConditionViolated";
    case InfeasibleReason::B1ConditionViolated: return "B1ConditionViolated";
    case InfeasibleReason::B2ConditionViolated: return "B2ConditionViolated";
    case InfeasibleReason::NoContestedBattlefield:
      return "NoContestedBattlefield";
  }
  return "?";
}

double h_value(const GameInstance& inst, const PreAllocation& p,
               const KappaPair& kappa, int b) {
  return std::fmin(inst.q * inst.w[b] * kappa.kappa_B,
                   inst.w[b] * kappa.kappa_A + p.p[b]);
}

std::pair<double, double> soe_residual(const GameInstance& inst,
                                       const PreAllocation& p,
                                       const KappaPair& kappa) {
  double lhs_A = 0.0, lhs_B = 0.0;
  for (int b = 0; b < inst.n; ++b) {
    const double h = h_value(inst, p, kappa, b);
    const double d = std::fmax(h - p.p[b], 0.0);  // no spend on outright wins
    lhs_A += d * d / (2.0 * inst.q * inst.w[b] * kappa.kappa_B);
    lhs_B += std::fmax(h * h - p.p[b] * p.p[b], 0.0) /
             (2.0 * inst.q * inst.w[b] * kappa.kappa_A);
  }
  return {std::abs(lhs_A - inst.RA), std::abs(lhs_B - inst.RB)};
}

PartitionQuantities partition_quantities(const GameInstance& inst,
                                         const PreAllocation& p,
                                         const Partition& part) {
  PartitionQuantities out;
  for (int b : part.b1) {
    out.W1 += inst.w[b];
    out.P1 += p.p[b];
    out.norm1 += p.p[b] * p.p[b] / inst.w[b];
  }
  for (int b : part.b2) {
    out.W2 += inst.w[b];
    out.P2 += p.p[b];
  }
  out.C1 = inst.RA + out.P1;
  out.C2 = inst.q * inst.RB - out.P2;
  out.H1 = out.C1 * out.C1 - out.W1 * out.norm1;
  out.H2 = out.C2 * out.C2 + out.W2 * out.norm1;
  return out;
}

PartitionSolveResult solve_partition(const GameInstance& inst,
                                     const PreAllocation& p,
                                     const Partition& part) {
  const double q = inst.q, RA = inst.RA, RB = inst.RB;
  if (!(RA > 0.0) || !(RB > 0.0))
    return {std::nullopt, InfeasibleReason::NonPositiveKappa, -1};
  if (part.b1.empty() && part.b2.empty())
    return {std::nullopt, InfeasibleReason::NoContestedBattlefield, -1};

  // Budget identities restricted to the contested battlefields. With one
  // side empty this collapses to the pure single-arm closed forms (W2 = 0
  // gives q*kB = (C1 + sqrt(H1))/W1; W1 = 0 gives kappa_A = 2*C2/W2).
  const PartitionQuantities Q = partition_quantities(inst, p, part);
  double disc = Q.H1 * Q.H2;
  if (disc < 0.0) {
    if (disc < -1e-14 * std::fmax(1.0, Q.C1 * Q.C1 * Q.H2))
      return {std::nullopt, InfeasibleReason::NegativeDiscriminant, -1};
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double denom = Q.W1 * Q.C2 * Q.C2 + Q.W2 * Q.C1 * Q.C1;
  KappaPair kappa;
  const double q_kB = (Q.C1 * Q.H2 + std::abs(Q.C2) * root) / denom;
  kappa.kappa_B = q_kB / q;
  // kappa_A from 2*q_kB*C1 - norm1 = 2*kappa_A*C2 + norm1; equals the
  // symmetric closed form when C2 > 0 and keeps the correct sign when
  // C2 <= 0 (then rejected below)
  kappa.kappa_A = (q_kB * Q.C1 - Q.norm1) / Q.C2;
  return check_conditions(inst, p, part, kappa);
}

Payoff payoff_from_kappa(const GameInstance& inst, const PreAllocation& p,
                         const KappaPair& kappa, const Partition& part) {
  const double q_kB = kappa.q_kappa_B(inst.q);
  double value = 0.0;
  for (int b : part.b0) value += inst.w[b];  // won by the head start alone
  for (int b : part.b1) {
    const double top = inst.w[b] * q_kB;  // q*w_b*kappa_B
    const double frac = p.p[b] / top;
    value += inst.w[b] *
             (1.0 - q_kB / (2.0 * kappa.kappa_A) * (1.0 - frac * frac));
  }
  for (int b : part.b2) {
    value += inst.w[b] * kappa.kappa_A / (2.0 * q_kB);
  }
  return make_payoff(inst.W, value);
}

namespace {

// bands in descending-ratio order: [0, j) outright, [j, k) B1, [k, n) B2
Partition threshold_partition(const std::vector<int>& order, int j, int k) {
  Partition part;
  part.b0.assign(order.begin(), order.begin() + j);
  part.b1.assign(order.begin() + j, order.begin() + k);
  part.b2.assign(order.begin() + k, order.end());
  std::sort(part.b0.begin(), part.b0.end());
  std::sort(part.b1.begin(), part.b1.end());
  std::sort(part.b2.begin(), part.b2.end());
  return part;
}

struct Candidate {
  Partition part;
  KappaPair kappa;
  double res_A = 0.0, res_B = 0.0;
  double rel = 0.0;
};

}  // namespace

GlfEquilibrium solve_glf(const GameInstance& inst, const PreAllocation& p) {
  if (!(inst.RA > 0.0))
    throw Error(Errc::ZeroBudget, "R_A = 0");
  if (!(inst.RB > 0.0))
    throw Error(Errc::ZeroBudget, "R_B = 0");

  std::vector<int> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> ratio(inst.n);
  for (int b = 0; b < inst.n; ++b) ratio[b] = p.p[b] / inst.w[b];
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ratio[a] > ratio[b];
  });

  const auto tied = [&](int a, int b) {
    const double scale = std::fmax(1.0, std::fmax(ratio[a], ratio[b]));
    return std::abs(ratio[a] - ratio[b]) <= 1e-12 * scale;
  };
  // a cut between two tied ratios splits a tie group
  std::vector<bool> splits(inst.n + 1, false);
  for (int k = 1; k < inst.n; ++k)
    splits[k] = tied(order[k - 1], order[k]);

  std::vector<Candidate> feasible;
  std::ostringstream diag;
  const auto try_cuts = [&](int j, int k) {
    Partition part = threshold_partition(order, j, k);
    PartitionSolveResult r = solve_partition(inst, p, part);
    if (!r.feasible()) {
      diag << " cuts=" << j << "," << k << ":"
           << infeasible_reason_name(r.reason);
      if (r.battlefield >= 0) diag << "@b" << r.battlefield;
      return;
    }
    Candidate c;
    c.part = std::move(part);
    c.kappa = *r.kappa;
    std::tie(c.res_A, c.res_B) = soe_residual(inst, p, c.kappa);
    c.rel = std::fmax(c.res_A / inst.RA, c.res_B / inst.RB);
    feasible.push_back(std::move(c));
  };

  // outright wins need a positive pre-allocation, so the B0 prefix cannot
  // reach past the last strictly positive ratio
  int max_j = 0;
  while (max_j < inst.n - 1 && ratio[order[max_j]] > 0.0) ++max_j;
  for (int pass = 0; pass < 2 && feasible.empty(); ++pass) {
    for (int j = 0; j <= max_j; ++j) {
      if (pass == 0 && splits[j]) continue;
      for (int k = j; k <= inst.n; ++k) {
        if (pass == 0 && k > j && splits[k]) continue;
        if (pass == 1 && !splits[j] && !splits[k]) continue;  // already tried
        try_cuts(j, k);
      }
    }
  }
  if (feasible.empty())
    throw Error(Errc::NoFeasiblePartition,
                "no threshold partition solves the system;" + diag.str());

  const Candidate* best = &feasible.front();
  for (const Candidate& c : feasible) {
    const auto key = [](const Candidate& x) {
      return std::make_tuple(x.rel, x.part.b0.size(), x.part.b1.size());
    };
    if (key(c) < key(*best)) best = &c;
  }

  GlfEquilibrium eq;
  eq.kappa = best->kappa;
  eq.partition = best->part;
  eq.payoff = payoff_from_kappa(inst, p, best->kappa, best->part);
  eq.residual_A = best->res_A;
  eq.residual_B = best->res_B;
  return eq;
}

std::vector<std::pair<Partition, KappaPair>> feasible_partitions_exhaustive(
    const GameInstance& inst, const PreAllocation& p) {
  if (inst.n > 8)
    throw Error(Errc::TooLarge, "exhaustive partition search limited to n <= 8");
  long total = 1;
  for (int b = 0; b < inst.n; ++b) total *= 3;
  std::vector<std::pair<Partition, KappaPair>> out;
  for (long code = 0; code < total; ++code) {
    Partition part;
    long rest = code;
    for (int b = 0; b < inst.n; ++b) {
      switch (rest % 3) {
        case 0: part.b0.push_back(b); break;
        case 1: part.b1.push_back(b); break;
        default: part.b2.push_back(b); break;
      }
      rest /= 3;
    }
    PartitionSolveResult r = solve_partition(inst, p, part);
    if (r.feasible()) out.emplace_back(std::move(part), *r.kappa);
  }
  return out;
}

}  // namespace lotto
