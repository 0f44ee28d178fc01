#pragma once

#include <optional>
#include <utility>

#include "lotto/types.hpp"

namespace lotto {

enum class RegimeTag { I, II, Boundary };

/// Payoff regime of an instance. tau is the R_A threshold separating the
/// two regimes, defined only when q*R_B >= P.
struct Regime {
  RegimeTag tag = RegimeTag::I;
  std::optional<double> tau;
};

const char* regime_name(RegimeTag tag);

/// R_A threshold 2(qR_B - P)^2 / (P + 2(qR_B - P)); requires q*RB >= P.
double regime_threshold(double q, double P, double RB);

/// Regime I value: W * (1 - qR_B/(2R_A) * ((R_A + s)/(P + R_A + s))^2)
/// with s = sqrt(R_A (R_A + 2P)). Requires R_A > 0.
double payoff_regime1(double W, double q, double P, double RA, double RB);

/// Regime II value: W * R_A / (2 (qR_B - P)). Requires qR_B > P.
double payoff_regime2(double W, double q, double P, double RA, double RB);

Regime classify_regime(const GameInstance& inst);

/// Equilibrium payoff of the two-stage game (A plays the proportional
/// pre-allocation in Stage 1). Handles R_A = 0 as the continuous limit:
/// W(1 - qR_B/P) when P >= qR_B, else 0.
double payoff_A_value(double W, double q, double P, double RA, double RB);

Payoff payoff_A(const GameInstance& inst);

/// kappa solution of the budget system at the proportional pre-allocation,
/// with the battlefield partition it induces (all-B1 in Regime I and on the
/// boundary, all-B2 in Regime II). Throws ZeroRealTimeBudget when R_A = 0.
std::pair<KappaPair, Partition> kappa_closed_form(const GameInstance& inst);

}  // namespace lotto
