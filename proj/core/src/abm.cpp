#include "broodsim/abm.hpp"

#include <algorithm>
#include <string>

#include "broodsim/parallel.hpp"
#include "broodsim/simplex_grid.hpp"

namespace broodsim {
namespace {

// Stream-key phases (D-7): one namespace per source of randomness.
enum StreamPhase : std::uint64_t {
  kPhaseCheat = 1,
  kPhaseReproduce = 2,
};

void validate_counts(const PopulationCounts& c) {
  if (c.sitters < 0 || c.identifiers < 0 || c.cheaters < 0) {
    throw DomainError("population counts must be nonnegative");
  }
  if (c.total() < 1) {
    throw DomainError("population must contain at least one agent");
  }
}

// Agent ids follow type order: nests (sitters then identifiers) take
// [0, n_S + n_I), cheaters the ids after. Each cheater's choice comes from its
// own (seed, generation, phase, agent) stream, so chunking cannot affect it.
std::vector<std::int64_t> draw_choices(const ModelState& state, int workers) {
  const std::int64_t nests = state.counts.sitters + state.counts.identifiers;
  const std::int64_t cheaters = state.counts.cheaters;
  std::vector<std::int64_t> out;
  if (nests == 0 || cheaters == 0) return out;
  out.resize(static_cast<std::size_t>(cheaters));
  const std::int64_t first_cheater = nests;
  parallel_chunks(out.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      StreamRng rng(state.seed, static_cast<std::uint64_t>(state.generation_index),
                    kPhaseCheat,
                    static_cast<std::uint64_t>(first_cheater +
                                               static_cast<std::int64_t>(k)));
      out[k] = static_cast<std::int64_t>(
          rng.next_below(static_cast<std::uint64_t>(nests)));
    }
  });
  return out;
}

std::pair<ModelState, GenerationReport> step_impl(const ModelState& state,
                                                  int workers) {
  validate_counts(state.counts);
  const std::vector<std::int64_t> choices = draw_choices(state, workers);
  GenerationReport report = account_with_nest_choices(state, choices);

  StreamRng repro_rng(state.seed, static_cast<std::uint64_t>(state.generation_index),
                      kPhaseReproduce, 0);
  report.post_counts =
      reproduce(report.total_utility, state.counts, state.mutation_rate, repro_rng);

  ModelState next = state;
  next.counts = report.post_counts;
  next.generation_index = state.generation_index + 1;
  next.nest_registry.clear();
  return {std::move(next), std::move(report)};
}

}  // namespace

SimplexPoint PopulationCounts::to_simplex() const {
  const std::int64_t n = total();
  if (n < 1) {
    throw DomainError("cannot convert an empty population to proportions");
  }
  const double dn = static_cast<double>(n);
  return SimplexPoint(static_cast<double>(sitters) / dn,
                      static_cast<double>(identifiers) / dn,
                      static_cast<double>(cheaters) / dn);
}

PopulationCounts PopulationCounts::from_simplex(const SimplexPoint& point,
                                                std::int64_t total) {
  const auto c = apportion_largest_remainder(point, total);
  return PopulationCounts{c[0], c[1], c[2]};
}

ModelState init_model(const PopulationCounts& counts, const GameParams& params,
                      double mutation_rate, std::uint64_t seed) {
  validate_counts(counts);
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw DomainError("mutation rate must lie in [0, 1]");
  }
  return ModelState{counts, params, mutation_rate, seed, 0, {}};
}

std::vector<std::int64_t> draw_nest_choices(const ModelState& state) {
  validate_counts(state.counts);
  return draw_choices(state, 1);
}

GenerationReport account_with_nest_choices(const ModelState& state,
                                           std::span<const std::int64_t> choices) {
  validate_counts(state.counts);
  const std::int64_t n_s = state.counts.sitters;
  const std::int64_t n_i = state.counts.identifiers;
  const std::int64_t n_c = state.counts.cheaters;
  const std::int64_t nests = n_s + n_i;
  const double h = state.params.hatch_reward;
  const double e = state.params.sit_cost;
  const double i = state.params.identify_cost;

  const std::int64_t expected_choices = (nests == 0) ? 0 : n_c;
  if (static_cast<std::int64_t>(choices.size()) != expected_choices) {
    throw DomainError("expected " + std::to_string(expected_choices) +
                      " nest choices, got " + std::to_string(choices.size()));
  }

  // Phase 2 merge: cheater lay-intents applied in ascending agent order.
  std::vector<std::int32_t> registry(static_cast<std::size_t>(nests), 0);
  std::int64_t eggs_on_sitters = 0;
  for (const std::int64_t nest : choices) {
    if (nest < 0 || nest >= nests) {
      throw DomainError("nest choice out of range");
    }
    ++registry[static_cast<std::size_t>(nest)];
    if (nest < n_s) ++eggs_on_sitters;
  }
  const std::int64_t cheater_eggs = static_cast<std::int64_t>(choices.size());
  // Phase 3: identifiers discard every cheater egg in their nests.
  const std::int64_t eggs_discarded = cheater_eggs - eggs_on_sitters;

  // Phase 4/5: all remaining eggs hatch.
  //   sitter: own egg hatches (+h), sits on 1 + k eggs (-e each)
  //   identifier: -i to identify, own egg hatches (+h), sits on it (-e)
  //   cheater: +h iff its egg landed in a sitter nest
  GenerationReport report;
  report.pre_counts = state.counts;
  report.post_counts = state.counts;

  const double sitter_utility_base = h - e;
  report.total_utility[index_of(AgentType::kSitter)] =
      static_cast<double>(n_s) * sitter_utility_base -
      e * static_cast<double>(eggs_on_sitters);
  const double identifier_utility = h - e - i;
  report.total_utility[index_of(AgentType::kIdentifier)] =
      static_cast<double>(n_i) * identifier_utility;
  report.total_utility[index_of(AgentType::kCheater)] =
      h * static_cast<double>(eggs_on_sitters);

  if (n_s > 0) {
    report.mean_utility[index_of(AgentType::kSitter)] =
        report.total_utility[index_of(AgentType::kSitter)] /
        static_cast<double>(n_s);
  }
  if (n_i > 0) {
    // Quotient of the total would reintroduce rounding; the identifier payoff
    // is deterministic, so report it exactly.
    report.mean_utility[index_of(AgentType::kIdentifier)] = identifier_utility;
  }
  if (n_c > 0) {
    report.mean_utility[index_of(AgentType::kCheater)] =
        report.total_utility[index_of(AgentType::kCheater)] /
        static_cast<double>(n_c);
  }

  report.eggs_laid = {n_s, n_i, cheater_eggs};
  report.eggs_hatched = {n_s, n_i, eggs_on_sitters};
  report.eggs_discarded = eggs_discarded;
  return report;
}

GenerationReport measure_step(const ModelState& state) {
  return account_with_nest_choices(state, draw_nest_choices(state));
}

PopulationCounts reproduce(const std::array<double, 3>& total_utility,
                           const PopulationCounts& pre_counts,
                           double mutation_rate, StreamRng& rng) {
  std::array<double, 3> weights{};
  double weight_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    weights[static_cast<std::size_t>(k)] = std::max(total_utility[static_cast<std::size_t>(k)], 0.0);
    weight_sum += weights[static_cast<std::size_t>(k)];
  }
  if (weight_sum <= 0.0) {
    return pre_counts;  // nothing performed; the state carries forward
  }

  const std::int64_t n = pre_counts.total();
  const double t0 = weights[0] / weight_sum;
  const double t1 = (weights[0] + weights[1]) / weight_sum;
  std::array<std::int64_t, 3> offspring{};
  for (std::int64_t k = 0; k < n; ++k) {
    const double u = rng.next_unit();
    ++offspring[u < t0 ? 0 : (u < t1 ? 1 : 2)];
  }

  if (mutation_rate > 0.0) {
    std::array<std::int64_t, 3> mutated{};
    for (int type = 0; type < 3; ++type) {
      for (std::int64_t k = 0; k < offspring[static_cast<std::size_t>(type)]; ++k) {
        int final_type = type;
        if (rng.next_unit() < mutation_rate) {
          const int other = static_cast<int>(rng.next_below(2));
          final_type = (type + 1 + other) % 3;
        }
        ++mutated[static_cast<std::size_t>(final_type)];
      }
    }
    offspring = mutated;
  }
  return PopulationCounts{offspring[0], offspring[1], offspring[2]};
}

std::pair<ModelState, GenerationReport> step(const ModelState& state) {
  return step_impl(state, 1);
}

std::pair<ModelState, GenerationReport> parallel_step(const ModelState& state,
                                                      int workers) {
  if (workers < 1) {
    throw DomainError("worker count must be >= 1");
  }
  return step_impl(state, workers);
}

std::vector<RunSample> run(const ModelState& state, std::int64_t generations) {
  if (generations < 1) {
    throw DomainError("generation count must be >= 1");
  }
  std::vector<RunSample> samples;
  samples.reserve(static_cast<std::size_t>(generations));
  ModelState current = state;
  for (std::int64_t g = 0; g < generations; ++g) {
    auto [next, report] = step(current);
    current = std::move(next);
    samples.push_back(
        {current.generation_index, current.counts.to_simplex(), std::move(report)});
  }
  return samples;
}

}  // namespace broodsim
