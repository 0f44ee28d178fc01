#pragma once

#include <optional>
#include <vector>

#include "lotto/types.hpp"

namespace lotto {

enum class Branch { Linear, Quadratic };

const char* branch_name(Branch b);

/// One point of a payoff level set: payoff_A(P, R_A) = Pi against fixed
/// q*R_B, with the formula branch that produced R_A.
struct LevelPoint {
  double Pi = 0.0;
  double P = 0.0;
  double RA = 0.0;
  Branch branch = Branch::Linear;
};

/// R_A achieving payoff exactly Pi at the given P, or nullopt when
/// P > W*qR_B/(W - Pi) and the payoff exceeds Pi for every R_A >= 0.
/// Throws InvalidLevel unless 0 <= Pi < W.
std::optional<LevelPoint> level_RA(double Pi, double P, double RB, double q,
                                   double W);

/// Samples the Pi-level curve over P in [0, W*qR_B/(W - Pi)]: num_points
/// uniform samples plus the exact branch-switch point when it falls
/// strictly inside. Ascending P; the final point has R_A = 0 exactly.
std::vector<LevelPoint> level_curve(double Pi, double RB, double q, double W,
                                    int num_points);

/// Pre-allocated budget P_bar matching the payoff of R_A real-time
/// resources deployed alone: 2*R_A when R_A > qR_B, else
/// 2(qR_B)^2/(2qR_B - R_A). The ratio P_bar/R_A is always >= 2.
double effectiveness_equivalent_P(double RA, double RB, double q);

/// Optimal purchase under R_A + c*P <= X_A. When c = t the optimum is the
/// whole interval P in [0, interval_upper]; P_star = 0 is the canonical
/// representative. Budget is always exhausted: RA_star = X_A - c*P_star.
struct Investment {
  double P_star = 0.0;
  double RA_star = 0.0;
  double payoff = 0.0;
  double t = 0.0;  // min(1, X_A/(qR_B))
  std::optional<double> interval_upper;
};

Investment optimal_investment(double XA, double c, double RB, double q,
                              double W);

}  // namespace lotto
