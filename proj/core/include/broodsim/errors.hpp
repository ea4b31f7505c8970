#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace broodsim {

// Invalid input: malformed simplex point, non-positive payoff parameter,
// unusable replicate schedule, and the like.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation-specific precondition failed (e.g. classifying a point that is
// not a rest point of the dynamics).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// nash_equilibrium requires h - e - i > 0; outside that region the game has no
// interior equilibrium.
class NoInteriorEquilibrium : public DomainError {
 public:
  NoInteriorEquilibrium(double h, double e, double i)
      : DomainError("no interior equilibrium: h - e - i = " +
                    std::to_string(h - e - i) + " is not positive") {}
};

// An integration step left the simplex by more than the recovery tolerance.
class IntegrationError : public DomainError {
 public:
  IntegrationError(const std::string& what, std::size_t step_index)
      : DomainError(what + " at step " + std::to_string(step_index)),
        step_index_(step_index) {}

  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

}  // namespace broodsim
