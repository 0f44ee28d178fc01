#include "lotto/types.hpp"

#include <cassert>
#include <cmath>
#include <string>
#include <utility>

namespace lotto {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyBattlefields: return "EmptyBattlefields";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NonPositiveQ: return "NonPositiveQ";
    case Errc::NegativeBudget: return "NegativeBudget";
    case Errc::NonPositiveRB: return "NonPositiveRB";
    case Errc::BadPreAllocation: return "BadPreAllocation";
    case Errc::ZeroRealTimeBudget: return "ZeroRealTimeBudget";
    case Errc::ZeroBudget: return "ZeroBudget";
    case Errc::NoFeasiblePartition: return "NoFeasiblePartition";
    case Errc::InvalidLevel: return "InvalidLevel";
    case Errc::InvalidCost: return "InvalidCost";
    case Errc::InvalidStep: return "InvalidStep";
    case Errc::TooLarge: return "TooLarge";
  }
  return "UnknownError";
}

GameInstance make_instance(std::vector<double> w, double q, double P,
                           double RA, double RB) {
  if (w.empty())
    throw Error(Errc::EmptyBattlefields, "w must have at least one entry");
  for (std::size_t b = 0; b < w.size(); ++b) {
    if (!(w[b] > 0.0) || !std::isfinite(w[b]))
      throw Error(Errc::NonPositiveWeight,
                  "w[" + std::to_string(b) + "] = " + std::to_string(w[b]));
  }
  if (!(q > 0.0) || !std::isfinite(q))
    throw Error(Errc::NonPositiveQ, "q = " + std::to_string(q));
  if (!(P >= 0.0) || !std::isfinite(P))
    throw Error(Errc::NegativeBudget, "P = " + std::to_string(P));
  if (!(RA >= 0.0) || !std::isfinite(RA))
    throw Error(Errc::NegativeBudget, "R_A = " + std::to_string(RA));
  if (!(RB > 0.0) || !std::isfinite(RB))
    throw Error(Errc::NonPositiveRB, "R_B = " + std::to_string(RB));

  GameInstance inst;
  inst.n = static_cast<int>(w.size());
  inst.w = std::move(w);
  inst.q = q;
  inst.P = P;
  inst.RA = RA;
  inst.RB = RB;
  double W = 0.0;
  for (double wb : inst.w) W += wb;
  inst.W = W;
#ifndef NDEBUG
  {
    double W2 = 0.0;
    for (double wb : inst.w) W2 += wb;
    assert(W2 == inst.W && "cached W must match a recomputation");
  }
#endif
  return inst;
}

PreAllocation make_preallocation(const GameInstance& inst,
                                 std::vector<double> p) {
  if (static_cast<int>(p.size()) != inst.n)
    throw Error(Errc::BadPreAllocation,
                "p has " + std::to_string(p.size()) + " entries, expected " +
                    std::to_string(inst.n));
  double sum = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (!(p[b] >= 0.0) || !std::isfinite(p[b]))
      throw Error(Errc::BadPreAllocation,
                  "p[" + std::to_string(b) + "] = " + std::to_string(p[b]));
    sum += p[b];
  }
  if (std::abs(sum - inst.P) > simplex_tolerance(inst.P))
    throw Error(Errc::BadPreAllocation,
                "sum(p) = " + std::to_string(sum) + " but P = " +
                    std::to_string(inst.P));
  return PreAllocation{std::move(p)};
}

PreAllocation proportional_preallocation(const GameInstance& inst) {
  std::vector<double> p(inst.w.size());
  const double scale = inst.P / inst.W;
  for (std::size_t b = 0; b < p.size(); ++b) p[b] = scale * inst.w[b];
  return PreAllocation{std::move(p)};
}

double weighted_norm_sq(const GameInstance& inst, const PreAllocation& p) {
  double s = 0.0;
  for (int b = 0; b < inst.n; ++b) s += p.p[b] * p.p[b] / inst.w[b];
  return s;
}

Payoff make_payoff(double W, double value_A) {
  assert(value_A >= -1e-9 * (W > 1 ? W : 1.0) &&
         value_A <= W + 1e-9 * (W > 1 ? W : 1.0));
  return Payoff{value_A, W - value_A};
}

}  // namespace lotto
