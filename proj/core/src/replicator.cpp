#include "broodsim/replicator.hpp"

#include <algorithm>
#include <cmath>

#include "broodsim/simplex_grid.hpp"

namespace broodsim {
namespace {

std::array<double, 3> rhs_array(const SimplexPoint& p, const GameParams& g) {
  const TangentVector v = replicator_rhs(p, g);
  return {v.sitters, v.identifiers, v.cheaters};
}

// Reduced field f(x, y) = (v_S, v_I) at (x, y, 1 - x - y).
std::array<double, 2> reduced_rhs(double x, double y, const GameParams& g) {
  const TangentVector v = replicator_rhs(clamp_to_simplex(x, y, 1.0 - x - y), g);
  return {v.sitters, v.identifiers};
}

Stability classify_eigenvalues(const std::array<std::complex<double>, 2>& eig) {
  const double r1 = eig[0].real();
  const double r2 = eig[1].real();
  const double im = std::abs(eig[0].imag());
  if (std::abs(r1) < kStabilityTol || std::abs(r2) < kStabilityTol) {
    return Stability::kCenterMarginal;
  }
  if (r1 < 0.0 && r2 < 0.0) {
    return im > kStabilityTol ? Stability::kStableSpiral : Stability::kStableNode;
  }
  if (r1 > 0.0 && r2 > 0.0) {
    return im > kStabilityTol ? Stability::kUnstableSpiral
                              : Stability::kUnstableNode;
  }
  return Stability::kSaddle;
}

}  // namespace

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::kStableNode: return "stable-node";
    case Stability::kStableSpiral: return "stable-spiral";
    case Stability::kUnstableNode: return "unstable-node";
    case Stability::kUnstableSpiral: return "unstable-spiral";
    case Stability::kSaddle: return "saddle";
    case Stability::kCenterMarginal: return "center-marginal";
  }
  return "unknown";
}

TangentVector replicator_rhs(const SimplexPoint& point, const GameParams& params) {
  if (point.is_all_cheater()) {
    return {0.0, 0.0, 0.0};
  }
  const PayoffVector pay = expected_payoffs(point, params);
  const double e_s = pay.sitter.value();
  const double mean = point.sitters() * e_s + point.identifiers() * pay.identifier +
                      point.cheaters() * pay.cheater;
  return {point.sitters() * (e_s - mean),
          point.identifiers() * (pay.identifier - mean),
          point.cheaters() * (pay.cheater - mean)};
}

Trajectory integrate_trajectory(const SimplexPoint& start, const GameParams& params,
                                double dt, std::int64_t steps) {
  if (!(dt > 0.0)) {
    throw DomainError("integration step size must be positive");
  }
  if (steps < 0) {
    throw DomainError("step count must be nonnegative");
  }
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.samples.push_back({0.0, start});

  std::array<double, 3> p = start.as_array();
  auto stage = [&](const std::array<double, 3>& base,
                   const std::array<double, 3>& k, double scale) {
    return clamp_to_simplex(base[0] + scale * k[0], base[1] + scale * k[1],
                         base[2] + scale * k[2]);
  };
  for (std::int64_t n = 0; n < steps; ++n) {
    const auto k1 = rhs_array(clamp_to_simplex(p[0], p[1], p[2]), params);
    const auto k2 = rhs_array(stage(p, k1, dt / 2.0), params);
    const auto k3 = rhs_array(stage(p, k2, dt / 2.0), params);
    const auto k4 = rhs_array(stage(p, k3, dt), params);
    for (int k = 0; k < 3; ++k) {
      p[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      if (p[k] < -1e-6) {
        throw IntegrationError("integration left the simplex", static_cast<std::size_t>(n));
      }
      if (p[k] < 0.0) p[k] = 0.0;
    }
    const double sum = p[0] + p[1] + p[2];
    for (double& c : p) c /= sum;
    traj.samples.push_back({static_cast<double>(n + 1) * dt,
                            SimplexPoint(p[0], p[1], p[2])});
  }
  return traj;
}

std::vector<std::pair<SimplexPoint, TangentVector>> vector_field_grid(
    const GameParams& params, std::int64_t order) {
  if (order < 2) {
    throw DomainError("vector field grid order must be >= 2");
  }
  std::vector<std::pair<SimplexPoint, TangentVector>> grid;
  grid.reserve(static_cast<std::size_t>(lattice_size(order)));
  for (const SimplexPoint& p : barycentric_lattice(order)) {
    grid.emplace_back(p, replicator_rhs(p, params));
  }
  return grid;
}

std::array<double, 4> reduced_jacobian(const SimplexPoint& point,
                                       const GameParams& params, double step) {
  if (!(step > 0.0)) {
    throw DomainError("finite-difference step must be positive");
  }
  const double x = point.sitters();
  const double y = point.identifiers();
  std::array<double, 4> jac{};
  for (int coord = 0; coord < 2; ++coord) {
    const double base = coord == 0 ? x : y;
    // Step one-sided toward the interior where the probe would leave the
    // triangle {x >= 0, y >= 0, x + y <= 1}.
    double lo = base - step;
    double hi = base + step;
    if (lo < 0.0) lo = base;
    if ((coord == 0 ? hi + y : x + hi) > 1.0) hi = base;
    const double span = hi - lo;
    const auto f_hi =
        coord == 0 ? reduced_rhs(hi, y, params) : reduced_rhs(x, hi, params);
    const auto f_lo =
        coord == 0 ? reduced_rhs(lo, y, params) : reduced_rhs(x, lo, params);
    jac[static_cast<std::size_t>(coord)] = (f_hi[0] - f_lo[0]) / span;
    jac[static_cast<std::size_t>(2 + coord)] = (f_hi[1] - f_lo[1]) / span;
  }
  return jac;
}

FixedPointReport classify_fixed_point(const SimplexPoint& candidate,
                                      const GameParams& params) {
  const TangentVector v = replicator_rhs(candidate, params);
  const double speed = std::sqrt(v.sitters * v.sitters +
                                 v.identifiers * v.identifiers +
                                 v.cheaters * v.cheaters);
  if (speed > kRestPointTol) {
    throw PreconditionError("candidate is not a rest point: |rhs| = " +
                            std::to_string(speed));
  }

  const std::array<double, 4> j = reduced_jacobian(candidate, params, kJacobianStep);
  const double tr = j[0] + j[3];
  const double det = j[0] * j[3] - j[1] * j[2];
  const double disc = tr * tr - 4.0 * det;

  FixedPointReport report{candidate, std::nullopt, {}, Stability::kCenterMarginal,
                          false};
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    report.eigenvalues = {std::complex<double>((tr + root) / 2.0, 0.0),
                          std::complex<double>((tr - root) / 2.0, 0.0)};
  } else {
    const double im = std::sqrt(-disc) / 2.0;
    report.eigenvalues = {std::complex<double>(tr / 2.0, im),
                          std::complex<double>(tr / 2.0, -im)};
  }
  report.classification = classify_eigenvalues(report.eigenvalues);
  report.ess_flag = report.classification == Stability::kStableNode ||
                    report.classification == Stability::kStableSpiral;
  if (candidate.is_interior()) {
    report.payoff_residual = payoff_residual(candidate, params);
  }
  return report;
}

}  // namespace broodsim
