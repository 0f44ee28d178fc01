#include "lotto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lotto/closed_form.hpp"

namespace lotto {

const char* branch_name(Branch b) {
  return b == Branch::Linear ? "linear" : "quadratic";
}

namespace {

double quadratic_branch(double Pi, double P, double qRB, double W) {
  const double num = qRB * W - (W - Pi) * P;
  return num * num / (2.0 * qRB * (W - Pi) * W);
}

void check_level(double Pi, double W) {
  if (!(Pi >= 0.0) || Pi >= W || !std::isfinite(Pi))
    throw Error(Errc::InvalidLevel,
                "Pi = " + std::to_string(Pi) + " must lie in [0, W); W = " +
                    std::to_string(W));
}

}  // namespace

std::optional<LevelPoint> level_RA(double Pi, double P, double RB, double q,
                                   double W) {
  check_level(Pi, W);
  const double qRB = q * RB;
  if (P > W * qRB / (W - Pi)) return std::nullopt;  // payoff > Pi for all R_A
  LevelPoint pt;
  pt.Pi = Pi;
  pt.P = P;
  if (2.0 * Pi < W && P < (W - 2.0 * Pi) * qRB / (W - Pi)) {
    pt.RA = 2.0 * Pi / W * (qRB - P);
    pt.branch = Branch::Linear;
  } else {
    pt.RA = quadratic_branch(Pi, P, qRB, W);
    pt.branch = Branch::Quadratic;
  }
  return pt;
}

std::vector<LevelPoint> level_curve(double Pi, double RB, double q, double W,
                                    int num_points) {
  check_level(Pi, W);
  if (num_points < 2)
    throw Error(Errc::InvalidLevel, "num_points must be >= 2");
  const double qRB = q * RB;
  const double P_end = W * qRB / (W - Pi);

  std::vector<double> grid;
  grid.reserve(num_points + 1);
  grid.push_back(0.0);
  for (int i = 1; i + 1 < num_points; ++i)
    grid.push_back(P_end * i / (num_points - 1));
  grid.push_back(P_end);  // exact endpoint, not a rounded i/(n-1) multiple
  if (2.0 * Pi < W) {
    const double P_switch = (W - 2.0 * Pi) * qRB / (W - Pi);
    if (P_switch > 0.0 && P_switch < P_end) grid.push_back(P_switch);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) {
                           return std::abs(a - b) <= 1e-12 * P_end;
                         }),
             grid.end());

  std::vector<LevelPoint> out;
  out.reserve(grid.size());
  for (double P : grid) out.push_back(level_RA(Pi, P, RB, q, W).value());
  out.back().RA = 0.0;  // R_A vanishes exactly at P_end
  return out;
}

double effectiveness_equivalent_P(double RA, double RB, double q) {
  const double qRB = q * RB;
  if (RA > qRB) return 2.0 * RA;
  return 2.0 * qRB * qRB / (2.0 * qRB - RA);
}

Investment optimal_investment(double XA, double c, double RB, double q,
                              double W) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(Errc::InvalidCost, "c = " + std::to_string(c));
  if (!(XA > 0.0))
    throw Error(Errc::NegativeBudget, "X_A = " + std::to_string(XA));
  if (!(RB > 0.0))
    throw Error(Errc::NonPositiveRB, "R_B = " + std::to_string(RB));
  const double qRB = q * RB;

  Investment inv;
  inv.t = std::fmin(1.0, XA / qRB);
  const double interior_P = (1.0 - c / (2.0 - c)) * XA / c;
  if (c < inv.t) {
    inv.P_star = interior_P;
    inv.payoff = W * (1.0 - qRB / (2.0 * XA) * c * (2.0 - c));
  } else {
    inv.P_star = 0.0;
    if (c == inv.t) inv.interval_upper = interior_P;
    inv.payoff = XA >= qRB ? W * (1.0 - qRB / (2.0 * XA))
                           : W * XA / (2.0 * qRB);
  }
  inv.RA_star = XA - c * inv.P_star;
  return inv;
}

}  // namespace lotto
