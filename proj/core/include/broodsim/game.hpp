#pragma once

#include <array>

#include "broodsim/errors.hpp"

namespace broodsim {

// Accepted drift when validating points that arrive from integrators or count
// conversions: |sum - 1| up to kSimplexSumTol, components down to
// -kSimplexNegTol (clipped to zero, then the point is renormalized).
inline constexpr double kSimplexSumTol = 1e-9;
inline constexpr double kSimplexNegTol = 1e-12;

// Payoff constants of the nest game. A hatched egg pays its layer
// `hatch_reward` (h), sitting costs `sit_cost` (e) per egg sat on, and
// recognizing the eggs in a nest costs a flat `identify_cost` (i).
struct GameParams {
  double hatch_reward;
  double sit_cost;
  double identify_cost;

  GameParams(double h, double e, double i)
      : hatch_reward(h), sit_cost(e), identify_cost(i) {
    if (!(h > 0.0) || !(e > 0.0) || !(i > 0.0)) {
      throw DomainError("game parameters must satisfy h, e, i > 0");
    }
  }

  // True iff h - e - i > 0, the hypothesis under which the interior
  // equilibrium exists.
  bool interior_ne_exists() const noexcept {
    return hatch_reward - sit_cost - identify_cost > 0.0;
  }
};

// A population mix (sitter, identifier, cheater shares) on the 2-simplex.
// Construction validates and normalizes, so a SimplexPoint is always a valid
// distribution afterwards.
class SimplexPoint {
 public:
  SimplexPoint(double sitters, double identifiers, double cheaters);

  double sitters() const noexcept { return p_[0]; }
  double identifiers() const noexcept { return p_[1]; }
  double cheaters() const noexcept { return p_[2]; }

  // Share of the population that builds nests (p_S + p_I).
  double nesters() const noexcept { return p_[0] + p_[1]; }

  bool is_interior() const noexcept {
    return p_[0] > 0.0 && p_[1] > 0.0 && p_[2] > 0.0;
  }
  bool is_all_cheater() const noexcept { return p_[0] == 0.0 && p_[1] == 0.0; }

  std::array<double, 3> as_array() const noexcept {
    return {p_[0], p_[1], p_[2]};
  }

  double operator[](int k) const noexcept { return p_[k]; }

 private:
  double p_[3];
};

// Expected payoff of the sitting strategy. At the all-cheater state the
// expectation diverges to -infinity; that case is carried as a sentinel so it
// can never leak into downstream arithmetic (value() refuses to produce it),
// while comparisons still order it below every finite payoff.
class SitterPayoff {
 public:
  static SitterPayoff finite(double v) noexcept { return SitterPayoff(false, v); }
  static SitterPayoff neg_infinity() noexcept { return SitterPayoff(true, 0.0); }

  bool is_neg_infinity() const noexcept { return neg_inf_; }

  double value() const {
    if (neg_inf_) {
      throw DomainError("sitter payoff is -infinity; not usable in arithmetic");
    }
    return v_;
  }

  friend bool operator==(const SitterPayoff& a, const SitterPayoff& b) noexcept {
    return a.neg_inf_ == b.neg_inf_ && (a.neg_inf_ || a.v_ == b.v_);
  }
  friend bool operator<(const SitterPayoff& a, const SitterPayoff& b) noexcept {
    if (a.neg_inf_) return !b.neg_inf_;
    return !b.neg_inf_ && a.v_ < b.v_;
  }
  friend bool operator<(const SitterPayoff& a, double b) noexcept {
    return a.neg_inf_ || a.v_ < b;
  }
  friend bool operator<(double a, const SitterPayoff& b) noexcept {
    return !b.neg_inf_ && a < b.v_;
  }
  friend bool operator==(const SitterPayoff& a, double b) noexcept {
    return !a.neg_inf_ && a.v_ == b;
  }

 private:
  SitterPayoff(bool neg_inf, double v) noexcept : neg_inf_(neg_inf), v_(v) {}

  bool neg_inf_;
  double v_;
};

// Expected utilities per strategy at a population mix. `identifier` and
// `cheater` are always finite; `cheater` lies in [0, h].
struct PayoffVector {
  SitterPayoff sitter;
  double identifier;
  double cheater;
};

// Build a point from coordinates that may have drifted outside the simplex
// (integrator stages, finite-difference probes, optimizer iterates): negatives
// are clipped to zero and the rest renormalized.
SimplexPoint clamp_to_simplex(double sitters, double identifiers, double cheaters);

// Expected payoffs at `point`:
//   E_S = h - e (1 + p_C / (p_S + p_I))
//   E_I = h - e - i
//   E_C = h p_S / (p_S + p_I)
// with E_S = -infinity and E_C = 0 when p_S + p_I = 0.
PayoffVector expected_payoffs(const SimplexPoint& point,
                              const GameParams& params);

// The unique interior equilibrium
//   (e (h-e-i) / (h (i+e)), e / h, i / (i+e)),
// at which all three strategies earn h - e - i. Throws NoInteriorEquilibrium
// unless h - e - i > 0.
SimplexPoint nash_equilibrium(const GameParams& params);

// Maximum pairwise absolute payoff difference at an interior point; zero
// exactly at an equilibrium. Non-interior points are rejected because the
// sitter payoff may be the -infinity sentinel there.
double payoff_residual(const SimplexPoint& point, const GameParams& params);

}  // namespace broodsim
