#include "broodsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "broodsim/parallel.hpp"
#include "broodsim/rng.hpp"
#include "broodsim/simplex_grid.hpp"

namespace broodsim {
namespace {

// Seed-derivation domains so no two operations share a replicate stream.
enum SeedDomain : std::uint64_t {
  kDomainEstimate = 0x1157,
  kDomainField = 0x21e1d,
  kDomainConverge = 0x3c0e,
  kDomainEss = 0x4e55,
};

double sample_std_error(std::span<const double> xs, double mean) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  // Constant samples must report exactly zero spread, not accumulated ulps.
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    return 0.0;
  }
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) /
         std::sqrt(static_cast<double>(n));
}

// ---- single-linkage clustering over a bucket grid ------------------------

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::int64_t bucket_key(const std::array<double, 3>& p, double radius) {
  const auto kx = static_cast<std::int64_t>(std::floor(p[0] / radius));
  const auto ky = static_cast<std::int64_t>(std::floor(p[1] / radius));
  return kx * (std::int64_t{1} << 21) + ky;
}

// Exact single linkage: indices i, j end up in one cluster iff they are
// connected by a chain of pairs within `radius`. Pairs are found through a
// grid of radius-sized buckets on the first two coordinates, which is a
// superset test for 3-D distance on the simplex.
std::vector<std::vector<std::size_t>> single_linkage(
    const std::vector<std::array<double, 3>>& points, double radius) {
  UnionFind uf(points.size());
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  buckets.reserve(points.size());
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    buckets[bucket_key(points[idx], radius)].push_back(idx);
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    const auto base = bucket_key(points[a], radius);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find(base + dx * (std::int64_t{1} << 21) + dy);
        if (it == buckets.end()) continue;
        for (const std::size_t b : it->second) {
          if (b <= a) continue;
          if (dist3(points[a], points[b]) <= radius) uf.unite(a, b);
        }
      }
    }
  }
  // Group by root, ordering clusters by their smallest member so the output
  // is independent of hash iteration order.
  std::map<std::size_t, std::size_t> root_to_min;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    auto [it, inserted] = root_to_min.try_emplace(uf.find(idx), idx);
    if (!inserted) it->second = std::min(it->second, idx);
  }
  std::map<std::size_t, std::vector<std::size_t>> by_min;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    by_min[root_to_min[uf.find(idx)]].push_back(idx);
  }
  std::vector<std::vector<std::size_t>> clusters;
  clusters.reserve(by_min.size());
  for (auto& [min_idx, members] : by_min) clusters.push_back(std::move(members));
  return clusters;
}

// ---- derivative-free polish ----------------------------------------------

// Nelder-Mead on the reduced coordinates, clamped to the triangle
// {x >= 0, y >= 0, x + y <= 1}. Returns (x, y) and the final value.
template <typename Fn>
std::pair<std::array<double, 2>, double> nelder_mead_2d(Fn&& f,
                                                        std::array<double, 2> start) {
  constexpr int kMaxIter = 500;
  constexpr double kFTol = 1e-12;
  auto clamp = [](std::array<double, 2> v) {
    v[0] = std::max(v[0], 0.0);
    v[1] = std::max(v[1], 0.0);
    const double s = v[0] + v[1];
    if (s > 1.0) {
      v[0] /= s;
      v[1] /= s;
    }
    return v;
  };
  constexpr double kInit = 0.02;
  std::array<std::array<double, 2>, 3> simplex = {
      clamp(start), clamp({start[0] + kInit, start[1]}),
      clamp({start[0], start[1] + kInit})};
  std::array<double, 3> value = {f(simplex[0]), f(simplex[1]), f(simplex[2])};

  auto order = [&] {
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        if (value[b] < value[a]) {
          std::swap(value[a], value[b]);
          std::swap(simplex[a], simplex[b]);
        }
      }
    }
  };
  auto diameter = [&] {
    double d = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        d = std::max(d, std::hypot(simplex[a][0] - simplex[b][0],
                                   simplex[a][1] - simplex[b][1]));
      }
    }
    return d;
  };
  for (int iter = 0; iter < kMaxIter; ++iter) {
    order();
    if (value[2] - value[0] <= kFTol && diameter() <= 1e-9) break;
    const std::array<double, 2> centroid = {(simplex[0][0] + simplex[1][0]) / 2.0,
                                            (simplex[0][1] + simplex[1][1]) / 2.0};
    auto blend = [&](double t) {
      return clamp({centroid[0] + t * (centroid[0] - simplex[2][0]),
                    centroid[1] + t * (centroid[1] - simplex[2][1])});
    };
    const auto reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < value[0]) {
      const auto expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[2] = expanded;
        value[2] = fe;
      } else {
        simplex[2] = reflected;
        value[2] = fr;
      }
    } else if (fr < value[1]) {
      simplex[2] = reflected;
      value[2] = fr;
    } else {
      const auto contracted = blend(-0.5);
      const double fc = f(contracted);
      if (fc < value[2]) {
        simplex[2] = contracted;
        value[2] = fc;
      } else {
        for (int k = 1; k < 3; ++k) {
          simplex[k] = clamp({simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                              simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1])});
          value[k] = f(simplex[k]);
        }
      }
    }
  }
  order();
  return {simplex[0], value[0]};
}

double field_energy(const std::array<double, 2>& xy, const GameParams& params) {
  const SimplexPoint p = clamp_to_simplex(xy[0], xy[1], 1.0 - xy[0] - xy[1]);
  const TangentVector v = replicator_rhs(p, params);
  return v.sitters * v.sitters + v.identifiers * v.identifiers +
         v.cheaters * v.cheaters;
}

}  // namespace

MCEstimate estimate_payoffs_mc(const SimplexPoint& point, const GameParams& params,
                               std::int64_t n_agents, std::int64_t reps,
                               std::uint64_t seed, int workers) {
  if (n_agents < 3) {
    throw DomainError("population size must be >= 3");
  }
  if (reps < 1) {
    throw DomainError("replicate count must be >= 1");
  }
  const int n_workers = resolve_workers(workers);
  const PopulationCounts counts = PopulationCounts::from_simplex(point, n_agents);

  MCEstimate estimate{counts.to_simplex(), counts, reps, {}, {}};

  std::vector<std::array<double, 3>> samples(static_cast<std::size_t>(reps));
  parallel_chunks(samples.size(), n_workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const ModelState state = init_model(
          counts, params, 0.0, derive_seed(seed, kDomainEstimate, r));
      const GenerationReport report = measure_step(state);
      for (int t = 0; t < 3; ++t) {
        samples[r][static_cast<std::size_t>(t)] =
            report.mean_utility[static_cast<std::size_t>(t)].value_or(0.0);
      }
    }
  });

  for (const AgentType type : kAgentTypes) {
    if (counts.of(type) == 0) continue;
    const auto t = static_cast<std::size_t>(index_of(type));
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s[t]);
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    estimate.mean[t] = mean;
    estimate.std_error[t] = sample_std_error(xs, mean);
  }
  return estimate;
}

std::vector<FieldSample> abm_vector_field(const GameParams& params,
                                          std::int64_t n_agents, std::int64_t reps,
                                          std::int64_t order, std::uint64_t seed,
                                          double mutation_rate, int workers) {
  if (order < 2) {
    throw DomainError("field lattice order must be >= 2");
  }
  if (n_agents < order) {
    throw DomainError("population size must be at least the lattice order");
  }
  if (reps < 1) {
    throw DomainError("replicate count must be >= 1");
  }
  const int n_workers = resolve_workers(workers);
  const std::vector<SimplexPoint> lattice = barycentric_lattice(order);
  std::vector<PopulationCounts> counts;
  std::vector<SimplexPoint> starts;
  counts.reserve(lattice.size());
  starts.reserve(lattice.size());
  for (const SimplexPoint& p : lattice) {
    counts.push_back(PopulationCounts::from_simplex(p, n_agents));
    starts.push_back(counts.back().to_simplex());
  }

  const std::size_t n_units = lattice.size() * static_cast<std::size_t>(reps);
  std::vector<std::array<double, 3>> displacement(n_units);
  parallel_chunks(n_units, n_workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const std::size_t pi = u / static_cast<std::size_t>(reps);
      const ModelState state = init_model(counts[pi], params, mutation_rate,
                                          derive_seed(seed, kDomainField, u));
      const auto [next, report] = step(state);
      const SimplexPoint endpoint = next.counts.to_simplex();
      const auto s = starts[pi].as_array();
      const auto f = endpoint.as_array();
      displacement[u] = {f[0] - s[0], f[1] - s[1], f[2] - s[2]};
    }
  });

  std::vector<FieldSample> field;
  field.reserve(lattice.size());
  for (std::size_t pi = 0; pi < lattice.size(); ++pi) {
    std::array<double, 3> mean{};
    for (std::int64_t r = 0; r < reps; ++r) {
      const auto& d =
          displacement[pi * static_cast<std::size_t>(reps) + static_cast<std::size_t>(r)];
      for (int k = 0; k < 3; ++k) mean[static_cast<std::size_t>(k)] += d[static_cast<std::size_t>(k)];
    }
    for (double& c : mean) c /= static_cast<double>(reps);
    field.push_back({starts[pi], mean, reps, FieldSource::kAbm});
  }
  return field;
}

std::vector<FieldSample> analytic_field_samples(const GameParams& params,
                                                std::int64_t order) {
  std::vector<FieldSample> field;
  for (const auto& [point, v] : vector_field_grid(params, order)) {
    field.push_back({point, {v.sitters, v.identifiers, v.cheaters}, 0,
                     FieldSource::kAnalytic});
  }
  return field;
}

ConvergenceStudy convergence_study(const SimplexPoint& point,
                                   const GameParams& params, std::int64_t n_agents,
                                   std::span<const std::int64_t> reps_schedule,
                                   std::uint64_t seed, int workers) {
  if (reps_schedule.size() < 3) {
    throw DomainError("replicate schedule needs at least 3 entries");
  }
  for (std::size_t k = 0; k < reps_schedule.size(); ++k) {
    if (reps_schedule[k] < 1 ||
        (k > 0 && reps_schedule[k] <= reps_schedule[k - 1])) {
      throw DomainError("replicate schedule must be strictly increasing");
    }
  }
  if (n_agents < 3) {
    throw DomainError("population size must be >= 3");
  }
  const PopulationCounts counts = PopulationCounts::from_simplex(point, n_agents);
  const SimplexPoint snapped = counts.to_simplex();
  const PayoffVector payoffs = expected_payoffs(snapped, params);
  if (payoffs.sitter.is_neg_infinity()) {
    throw DomainError(
        "analytic reference diverges at the all-cheater state; convergence "
        "study undefined");
  }

  ConvergenceStudy study{
      snapped,
      {payoffs.sitter.value(), payoffs.identifier, payoffs.cheater},
      {},
      std::nullopt};

  bool slope_defined = true;
  std::vector<double> log_reps;
  std::vector<double> log_stderr;
  for (std::size_t k = 0; k < reps_schedule.size(); ++k) {
    const MCEstimate est =
        estimate_payoffs_mc(snapped, params, n_agents, reps_schedule[k],
                            derive_seed(seed, kDomainConverge, k), workers);
    ConvergenceRow row;
    row.reps = reps_schedule[k];
    double pooled = 0.0;
    int present = 0;
    for (int t = 0; t < 3; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      if (!est.mean[ti].has_value()) continue;
      row.abs_error[ti] = std::abs(*est.mean[ti] - *study.analytic[ti]);
      row.std_error[ti] = est.std_error[ti];
      pooled += *est.std_error[ti];
      ++present;
    }
    if (present == 0 || pooled <= 0.0) {
      slope_defined = false;
    } else {
      log_reps.push_back(std::log(static_cast<double>(row.reps)));
      log_stderr.push_back(std::log(pooled / present));
    }
    study.rows.push_back(row);
  }

  if (slope_defined && log_reps.size() >= 2) {
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t k = 0; k < log_reps.size(); ++k) {
      x_mean += log_reps[k];
      y_mean += log_stderr[k];
    }
    x_mean /= static_cast<double>(log_reps.size());
    y_mean /= static_cast<double>(log_reps.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < log_reps.size(); ++k) {
      sxx += (log_reps[k] - x_mean) * (log_reps[k] - x_mean);
      sxy += (log_reps[k] - x_mean) * (log_stderr[k] - y_mean);
    }
    study.stderr_slope = sxy / sxx;
  }
  return study;
}

EssSearchResult ess_search(const GameParams& params, const EssSearchConfig& config) {
  if (config.initial_order < 2) {
    throw DomainError("initial lattice order must be >= 2");
  }
  if (config.target_order < config.initial_order) {
    throw DomainError("target order must not be coarser than the initial order");
  }
  if (config.refinement_factor < 2) {
    throw DomainError("refinement factor must be >= 2");
  }
  if (config.agent_schedule.empty() || config.reps_schedule.empty()) {
    throw DomainError("agent and replicate schedules must be non-empty");
  }
  if (config.trajectory_length < 1) {
    throw DomainError("trajectory length must be >= 1");
  }
  const int n_workers = resolve_workers(config.workers);

  EssSearchResult result;
  std::int64_t order = config.initial_order;
  std::vector<SimplexPoint> starts = barycentric_lattice(order);
  std::vector<std::array<double, 3>> unique_endpoints;
  std::vector<std::int64_t> multiplicity;
  std::vector<std::vector<std::size_t>> clusters;

  for (std::int64_t level = 0;; ++level) {
    const auto sched = static_cast<std::size_t>(
        std::min<std::int64_t>(level,
                               static_cast<std::int64_t>(config.agent_schedule.size()) - 1));
    const auto rched = static_cast<std::size_t>(
        std::min<std::int64_t>(level,
                               static_cast<std::int64_t>(config.reps_schedule.size()) - 1));
    const std::int64_t n_agents = config.agent_schedule[sched];
    const std::int64_t reps = config.reps_schedule[rched];
    if (n_agents < 3 || reps < 1) {
      throw DomainError("schedules must contain positive entries (agents >= 3)");
    }
    const double cell = 1.0 / static_cast<double>(order);

    std::vector<PopulationCounts> counts;
    counts.reserve(starts.size());
    for (const SimplexPoint& p : starts) {
      counts.push_back(PopulationCounts::from_simplex(p, n_agents));
    }
    const std::size_t n_units = starts.size() * static_cast<std::size_t>(reps);
    std::vector<std::array<double, 3>> endpoints(n_units);
    parallel_chunks(n_units, n_workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t u = begin; u < end; ++u) {
        const std::size_t pi = u / static_cast<std::size_t>(reps);
        ModelState state =
            init_model(counts[pi], params, config.mutation_rate,
                       derive_seed(config.seed, kDomainEss + static_cast<std::uint64_t>(level), u));
        for (std::int64_t t = 0; t < config.trajectory_length; ++t) {
          state = step(state).first;
        }
        endpoints[u] = state.counts.to_simplex().as_array();
      }
    });

    // Deduplicate exact endpoints (absorbed states pile up bitwise-equal).
    std::sort(endpoints.begin(), endpoints.end());
    unique_endpoints.clear();
    multiplicity.clear();
    for (const auto& p : endpoints) {
      if (!unique_endpoints.empty() && unique_endpoints.back() == p) {
        ++multiplicity.back();
      } else {
        unique_endpoints.push_back(p);
        multiplicity.push_back(1);
      }
    }
    clusters = single_linkage(unique_endpoints, cell);

    result.trace.push_back({level, cell, n_agents, reps,
                            static_cast<std::int64_t>(starts.size()),
                            static_cast<std::int64_t>(clusters.size())});
    if (order >= config.target_order) break;

    // Zoom: keep the finer lattice's cells that intersect a cluster region.
    const std::int64_t next_order =
        std::min(order * config.refinement_factor, config.target_order);
    std::unordered_map<std::int64_t, std::vector<std::size_t>> member_grid;
    for (std::size_t idx = 0; idx < unique_endpoints.size(); ++idx) {
      member_grid[bucket_key(unique_endpoints[idx], cell)].push_back(idx);
    }
    std::vector<SimplexPoint> refined;
    for (const SimplexPoint& q : barycentric_lattice(next_order)) {
      const auto qa = q.as_array();
      const auto base = bucket_key(qa, cell);
      bool keep = false;
      for (std::int64_t dx = -1; dx <= 1 && !keep; ++dx) {
        for (std::int64_t dy = -1; dy <= 1 && !keep; ++dy) {
          const auto it = member_grid.find(base + dx * (std::int64_t{1} << 21) + dy);
          if (it == member_grid.end()) continue;
          for (const std::size_t idx : it->second) {
            if (dist3(qa, unique_endpoints[idx]) <= cell) {
              keep = true;
              break;
            }
          }
        }
      }
      if (keep) refined.push_back(q);
    }
    if (refined.empty()) break;  // nothing left to zoom onto
    starts = std::move(refined);
    order = next_order;
  }

  // Polish each final cluster's centroid to the nearby rest point; drop
  // centroids that do not reach one, and merge duplicates.
  for (const auto& members : clusters) {
    std::array<double, 3> centroid{};
    double weight = 0.0;
    for (const std::size_t idx : members) {
      const double w = static_cast<double>(multiplicity[idx]);
      for (int k = 0; k < 3; ++k) {
        centroid[static_cast<std::size_t>(k)] += w * unique_endpoints[idx][static_cast<std::size_t>(k)];
      }
      weight += w;
    }
    for (double& c : centroid) c /= weight;

    const auto [xy, energy] = nelder_mead_2d(
        [&](const std::array<double, 2>& v) { return field_energy(v, params); },
        {centroid[0], centroid[1]});
    if (energy > kRestPointTol * kRestPointTol) continue;
    const SimplexPoint location = clamp_to_simplex(xy[0], xy[1], 1.0 - xy[0] - xy[1]);

    const auto loc = location.as_array();
    const bool duplicate =
        std::any_of(result.candidates.begin(), result.candidates.end(),
                    [&](const FixedPointReport& r) {
                      const auto other = r.location.as_array();
                      return std::abs(loc[0] - other[0]) + std::abs(loc[1] - other[1]) +
                                 std::abs(loc[2] - other[2]) <=
                             1e-3;
                    });
    if (duplicate) continue;
    result.candidates.push_back(classify_fixed_point(location, params));
  }
  result.ess_found = std::any_of(result.candidates.begin(), result.candidates.end(),
                                 [](const FixedPointReport& r) { return r.ess_flag; });
  return result;
}

}  // namespace broodsim
