#include "lotto/closed_form.hpp"

#include <cassert>
#include <cmath>

namespace lotto {

const char* regime_name(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::I: return "I";
    case RegimeTag::II: return "II";
    case RegimeTag::Boundary: return "Boundary";
  }
  return "?";
}

double regime_threshold(double q, double P, double RB) {
  const double g = q * RB - P;
  assert(g >= 0.0);
  return 2.0 * g * g / (P + 2.0 * g);
}

double payoff_regime1(double W, double q, double P, double RA, double RB) {
  const double s = std::sqrt(std::fmax(RA * (RA + 2.0 * P), 0.0));
  const double ratio = (RA + s) / (P + RA + s);
  return W * (1.0 - q * RB / (2.0 * RA) * ratio * ratio);
}

double payoff_regime2(double W, double q, double P, double RA, double RB) {
  return W * RA / (2.0 * (q * RB - P));
}

Regime classify_regime(const GameInstance& inst) {
  if (inst.q * inst.RB < inst.P) return Regime{RegimeTag::I, std::nullopt};
  const double tau = regime_threshold(inst.q, inst.P, inst.RB);
  const double tol = 1e-12 * (tau > 1.0 ? tau : 1.0);
  if (std::abs(inst.RA - tau) <= tol) return Regime{RegimeTag::Boundary, tau};
  if (inst.RA > tau) return Regime{RegimeTag::I, tau};
  return Regime{RegimeTag::II, tau};
}

double payoff_A_value(double W, double q, double P, double RA, double RB) {
  if (RA <= 0.0) {
    // Continuous limit of both regime formulas as R_A -> 0. Covers the
    // -1 ulp residue of callers forming R_A = X - c*P on a budget line.
    if (P > 0.0 && P >= q * RB) return W * (1.0 - q * RB / P);
    return 0.0;
  }
  if (q * RB < P || RA >= regime_threshold(q, P, RB))
    return payoff_regime1(W, q, P, RA, RB);
  return payoff_regime2(W, q, P, RA, RB);
}

Payoff payoff_A(const GameInstance& inst) {
  const double v =
      payoff_A_value(inst.W, inst.q, inst.P, inst.RA, inst.RB);
  return make_payoff(inst.W, v);
}

std::pair<KappaPair, Partition> kappa_closed_form(const GameInstance& inst) {
  if (inst.RA == 0.0)
    throw Error(Errc::ZeroRealTimeBudget, "kappas undefined at R_A = 0");
  const double W = inst.W, q = inst.q, P = inst.P, RA = inst.RA, RB = inst.RB;

  Partition part;
  KappaPair kappa;
  const Regime regime = classify_regime(inst);
  if (regime.tag == RegimeTag::II) {
    // all battlefields on the w_b*kappa_A + p_b arm
    const double g = q * RB - P;
    kappa.kappa_A = 2.0 * g / W;
    kappa.kappa_B = 2.0 * g * g / (W * RA) / q;
    part.b2.resize(inst.n);
    for (int b = 0; b < inst.n; ++b) part.b2[b] = b;
  } else {
    const double s = std::sqrt(std::fmax(RA * (RA + 2.0 * P), 0.0));
    const double q_kappa_B = (P + RA + s) / W;
    kappa.kappa_B = q_kappa_B / q;
    kappa.kappa_A = ((P + RA) * q_kappa_B - P * P / W) / (q * RB);
    part.b1.resize(inst.n);
    for (int b = 0; b < inst.n; ++b) part.b1[b] = b;
  }
  return {kappa, part};
}

}  // namespace lotto
