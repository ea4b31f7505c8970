#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "broodsim/game.hpp"
#include "broodsim/rng.hpp"

namespace broodsim {

enum class AgentType : int { kSitter = 0, kIdentifier = 1, kCheater = 2 };

inline constexpr std::array<AgentType, 3> kAgentTypes = {
    AgentType::kSitter, AgentType::kIdentifier, AgentType::kCheater};

inline constexpr int index_of(AgentType t) noexcept { return static_cast<int>(t); }

// Integer population per type. Bridges the agent model and the simplex.
struct PopulationCounts {
  std::int64_t sitters = 0;
  std::int64_t identifiers = 0;
  std::int64_t cheaters = 0;

  std::int64_t total() const noexcept { return sitters + identifiers + cheaters; }
  std::int64_t of(AgentType t) const noexcept {
    return t == AgentType::kSitter ? sitters
           : t == AgentType::kIdentifier ? identifiers
                                         : cheaters;
  }

  SimplexPoint to_simplex() const;

  // Largest-remainder rounding of proportions to counts summing to `total`.
  static PopulationCounts from_simplex(const SimplexPoint& point,
                                       std::int64_t total);

  friend bool operator==(const PopulationCounts&, const PopulationCounts&) = default;
};

// One generation's books: utilities and egg flows per type plus the counts
// before and after reproduction. Mean utilities are unset for absent types;
// the identifier mean is h - e - i exactly whenever identifiers exist.
struct GenerationReport {
  PopulationCounts pre_counts;
  PopulationCounts post_counts;
  std::array<double, 3> total_utility{};
  std::array<std::optional<double>, 3> mean_utility{};
  std::array<std::int64_t, 3> eggs_laid{};
  std::array<std::int64_t, 3> eggs_hatched{};
  std::int64_t eggs_discarded = 0;
};

// Full state of the generational model. Nests are owned by sitters and
// identifiers; `nest_registry[nest]` counts the cheater eggs laid into that
// nest during the running generation and is cleared before a step returns,
// so states handed between steps always carry an empty registry.
struct ModelState {
  PopulationCounts counts;
  GameParams params;
  double mutation_rate = 0.0;
  std::uint64_t seed = 0;
  std::int64_t generation_index = 0;
  std::vector<std::int32_t> nest_registry;
};

ModelState init_model(const PopulationCounts& counts, const GameParams& params,
                      double mutation_rate, std::uint64_t seed);

// Phase 2 of a generation: every cheater picks a nest uniformly at random
// from its own (seed, generation, phase, agent) stream. Returns one nest id
// per cheater, empty when there are no nests.
std::vector<std::int64_t> draw_nest_choices(const ModelState& state);

// Phases 1 and 3-5 for a fixed set of cheater nest choices: lay, identify
// (discarding cheater eggs in identifier nests), sit/hatch, and account.
// Pure in (state, choices); reproduction is not applied (post = pre).
// Nest ids: [0, n_S) are sitter nests, [n_S, n_S + n_I) identifier nests.
GenerationReport account_with_nest_choices(const ModelState& state,
                                           std::span<const std::int64_t> choices);

// Phases 1-5 only; used for utility measurement without reproduction noise.
GenerationReport measure_step(const ModelState& state);

// Phase 6: sample the next generation from a multinomial over per-type
// utility totals clamped at zero (negative performers draw no offspring).
// All-zero weights carry the counts forward unchanged. Each offspring then
// mutates with probability `mutation_rate` to one of the other two types.
// Population size is preserved exactly.
PopulationCounts reproduce(const std::array<double, 3>& total_utility,
                           const PopulationCounts& pre_counts,
                           double mutation_rate, StreamRng& rng);

// One full generation. Deterministic in (state contents, seed).
std::pair<ModelState, GenerationReport> step(const ModelState& state);

// Identical result to step() for every worker count: agents draw from their
// own derived streams against an immutable snapshot, and all intents are
// merged in ascending agent order regardless of scheduling.
std::pair<ModelState, GenerationReport> parallel_step(const ModelState& state,
                                                      int workers);

struct RunSample {
  std::int64_t generation;
  SimplexPoint point;
  GenerationReport report;
};

// Repeated stepping; emits proportions and the report after each generation.
std::vector<RunSample> run(const ModelState& state, std::int64_t generations);

}  // namespace broodsim
