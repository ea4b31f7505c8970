#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "broodsim/game.hpp"

namespace broodsim {

// Finite-difference step for the reduced Jacobian and the tolerance below
// which an eigenvalue real part counts as marginal.
inline constexpr double kJacobianStep = 1e-6;
inline constexpr double kStabilityTol = 1e-7;
// A candidate counts as a rest point when |replicator_rhs| <= this.
inline constexpr double kRestPointTol = 1e-6;

// Rate of change of the population shares; tangent to the simplex, so the
// components sum to zero.
struct TangentVector {
  double sitters = 0.0;
  double identifiers = 0.0;
  double cheaters = 0.0;
};

struct TrajectorySample {
  double time;
  SimplexPoint point;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // includes the start, times increasing
  double dt = 0.0;
};

enum class Stability {
  kStableNode,
  kStableSpiral,
  kUnstableNode,
  kUnstableSpiral,
  kSaddle,
  kCenterMarginal,
};

const char* to_string(Stability s) noexcept;

// Local portrait of the dynamics at a rest point. `payoff_residual` is only
// set for interior locations; boundary payoffs are not comparable. `ess_flag`
// is true only for asymptotically stable classifications.
struct FixedPointReport {
  SimplexPoint location;
  std::optional<double> payoff_residual;
  std::array<std::complex<double>, 2> eigenvalues;
  Stability classification = Stability::kCenterMarginal;
  bool ess_flag = false;
};

// Replicator vector field v_k = p_k (E_k - mean E). Strategies at share zero
// have zero rate; the all-cheater vertex is a rest point by convention.
TangentVector replicator_rhs(const SimplexPoint& point, const GameParams& params);

// Classical fixed-step RK4. After every step, components within the recovery
// tolerance below zero are clipped and the point renormalized; a component
// below -1e-6 aborts with IntegrationError carrying the step index.
Trajectory integrate_trajectory(const SimplexPoint& start, const GameParams& params,
                                double dt, std::int64_t steps);

// replicator_rhs at every barycentric lattice point of the given order, in
// canonical lattice order (a descending, then b).
std::vector<std::pair<SimplexPoint, TangentVector>> vector_field_grid(
    const GameParams& params, std::int64_t order);

// Jacobian of the dynamics reduced to (p_S, p_I) coordinates (p_C substituted
// as 1 - p_S - p_I), by central differences of the given step; one-sided
// toward the interior where a step would leave the simplex. Row-major 2x2.
std::array<double, 4> reduced_jacobian(const SimplexPoint& point,
                                       const GameParams& params, double step);

// Eigenvalue classification of an (approximate) rest point. Requires
// |replicator_rhs(candidate)| <= kRestPointTol.
FixedPointReport classify_fixed_point(const SimplexPoint& candidate,
                                      const GameParams& params);

}  // namespace broodsim
