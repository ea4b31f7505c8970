#include "broodsim/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace broodsim {

SimplexPoint::SimplexPoint(double sitters, double identifiers, double cheaters) {
  double v[3] = {sitters, identifiers, cheaters};
  for (double& c : v) {
    if (std::isnan(c) || c < -kSimplexNegTol) {
      throw DomainError("simplex component " + std::to_string(c) +
                        " is negative beyond tolerance");
    }
    if (c < 0.0) c = 0.0;
  }
  const double sum = v[0] + v[1] + v[2];
  if (std::abs(sum - 1.0) > kSimplexSumTol) {
    throw DomainError("simplex components sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  if (sum != 1.0) {
    for (double& c : v) c /= sum;
  }
  p_[0] = v[0];
  p_[1] = v[1];
  p_[2] = v[2];
}

SimplexPoint clamp_to_simplex(double sitters, double identifiers, double cheaters) {
  sitters = std::max(sitters, 0.0);
  identifiers = std::max(identifiers, 0.0);
  cheaters = std::max(cheaters, 0.0);
  const double sum = sitters + identifiers + cheaters;
  if (!(sum > 0.0)) {
    throw DomainError("cannot project a zero vector onto the simplex");
  }
  return SimplexPoint(sitters / sum, identifiers / sum, cheaters / sum);
}

PayoffVector expected_payoffs(const SimplexPoint& point,
                              const GameParams& params) {
  const double h = params.hatch_reward;
  const double e = params.sit_cost;
  const double i = params.identify_cost;
  const double nesters = point.nesters();
  if (nesters == 0.0) {
    return {SitterPayoff::neg_infinity(), h - e - i, 0.0};
  }
  const double e_s = h - e * (1.0 + point.cheaters() / nesters);
  const double e_c = h * point.sitters() / nesters;
  return {SitterPayoff::finite(e_s), h - e - i, e_c};
}

SimplexPoint nash_equilibrium(const GameParams& params) {
  const double h = params.hatch_reward;
  const double e = params.sit_cost;
  const double i = params.identify_cost;
  if (!params.interior_ne_exists()) {
    throw NoInteriorEquilibrium(h, e, i);
  }
  return SimplexPoint(e * (h - e - i) / (h * (i + e)), e / h, i / (i + e));
}

double payoff_residual(const SimplexPoint& point, const GameParams& params) {
  if (!point.is_interior()) {
    throw DomainError(
        "payoff residual requires an interior point; boundary payoffs are not "
        "comparable");
  }
  const PayoffVector p = expected_payoffs(point, params);
  const double e_s = p.sitter.value();
  return std::max({std::abs(e_s - p.identifier), std::abs(e_s - p.cheater),
                   std::abs(p.identifier - p.cheater)});
}

}  // namespace broodsim
