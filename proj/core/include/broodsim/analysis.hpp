#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "broodsim/abm.hpp"
#include "broodsim/game.hpp"
#include "broodsim/replicator.hpp"

namespace broodsim {

// Across-replicate utility estimate at one population mix. Types absent from
// the snapped counts carry no mean/std_error.
struct MCEstimate {
  SimplexPoint point;  // snapped evaluation point (counts / N)
  PopulationCounts counts;
  std::int64_t replicates = 0;
  std::array<std::optional<double>, 3> mean{};
  std::array<std::optional<double>, 3> std_error{};
};

// Monte Carlo estimate of per-type mean utilities: `reps` independent
// single-generation measurements (reproduction disabled) at the counts
// nearest to `point`. Replicate r draws its seed from (seed, r).
MCEstimate estimate_payoffs_mc(const SimplexPoint& point, const GameParams& params,
                               std::int64_t n_agents, std::int64_t reps,
                               std::uint64_t seed, int workers = 1);

enum class FieldSource { kAbm, kAnalytic };

// One arrow of a vector-field plot: either the across-replicate mean one-step
// proportion displacement of the agent model (replicates >= 1) or the
// replicator field itself (replicates == 0).
struct FieldSample {
  SimplexPoint point;
  std::array<double, 3> velocity{};
  std::int64_t replicates = 0;
  FieldSource source = FieldSource::kAnalytic;
};

// Mean one-step displacement field of the agent model on the barycentric
// lattice of the given order; `reps` full generations (reproduction included)
// are averaged per lattice point.
std::vector<FieldSample> abm_vector_field(const GameParams& params,
                                          std::int64_t n_agents, std::int64_t reps,
                                          std::int64_t order, std::uint64_t seed,
                                          double mutation_rate = 0.0,
                                          int workers = 1);

// The replicator field on the same lattice, wrapped as FieldSamples.
std::vector<FieldSample> analytic_field_samples(const GameParams& params,
                                                std::int64_t order);

struct ConvergenceRow {
  std::int64_t reps = 0;
  std::array<std::optional<double>, 3> abs_error{};
  std::array<std::optional<double>, 3> std_error{};
};

struct ConvergenceStudy {
  SimplexPoint point;           // snapped evaluation point
  std::array<std::optional<double>, 3> analytic{};  // reference payoffs
  std::vector<ConvergenceRow> rows;
  // Log-log least-squares slope of pooled std_error vs reps; unset when any
  // schedule entry has zero spread (deterministic measurement).
  std::optional<double> stderr_slope;
};

// estimate_payoffs_mc across a strictly increasing replicate schedule
// (length >= 3), with errors taken against the analytic payoffs at the
// snapped point. Rejects points where the sitter payoff diverges.
ConvergenceStudy convergence_study(const SimplexPoint& point,
                                   const GameParams& params, std::int64_t n_agents,
                                   std::span<const std::int64_t> reps_schedule,
                                   std::uint64_t seed, int workers = 1);

struct EssSearchConfig {
  std::int64_t initial_order = 10;   // starting lattice order (spacing 1/order)
  std::int64_t target_order = 80;    // stop once spacing <= 1/target_order
  std::int64_t refinement_factor = 2;
  std::vector<std::int64_t> agent_schedule = {100, 300, 1000};
  std::vector<std::int64_t> reps_schedule = {50, 150, 500};
  std::int64_t trajectory_length = 10;  // generations per endpoint run
  double mutation_rate = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct EssLevelTrace {
  std::int64_t level = 0;
  double cell_size = 0.0;
  std::int64_t n_agents = 0;
  std::int64_t reps = 0;
  std::int64_t lattice_points = 0;
  std::int64_t clusters = 0;
};

struct EssSearchResult {
  std::vector<FixedPointReport> candidates;
  std::vector<EssLevelTrace> trace;
  bool ess_found = false;
};

// Coarse-to-fine attractor search. Each level runs short agent-model
// trajectories from every lattice point, single-linkage clusters the
// endpoints (radius = cell size), then zooms the next, finer lattice onto
// cells intersecting those clusters while advancing the (agents, reps)
// schedule. Final clusters are polished to nearby rest points by local
// minimization of |replicator_rhs|^2 and classified; polished points that
// fail |rhs| <= kRestPointTol are dropped, and duplicates merged.
EssSearchResult ess_search(const GameParams& params, const EssSearchConfig& config);

}  // namespace broodsim
