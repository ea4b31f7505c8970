#include "broodsim/simplex_grid.hpp"

#include <algorithm>
#include <cmath>

namespace broodsim {

std::vector<SimplexPoint> barycentric_lattice(std::int64_t order) {
  if (order < 1) {
    throw DomainError("lattice order must be >= 1");
  }
  std::vector<SimplexPoint> points;
  points.reserve(static_cast<std::size_t>(lattice_size(order)));
  const double m = static_cast<double>(order);
  for (std::int64_t a = order; a >= 0; --a) {
    for (std::int64_t b = order - a; b >= 0; --b) {
      const std::int64_t c = order - a - b;
      points.emplace_back(static_cast<double>(a) / m, static_cast<double>(b) / m,
                          static_cast<double>(c) / m);
    }
  }
  return points;
}

std::array<std::int64_t, 3> apportion_largest_remainder(const SimplexPoint& point,
                                                        std::int64_t total) {
  if (total < 1) {
    throw DomainError("apportionment total must be >= 1");
  }
  const std::array<double, 3> p = point.as_array();
  std::array<std::int64_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::int64_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double quota = p[k] * static_cast<double>(total);
    counts[k] = static_cast<std::int64_t>(std::floor(quota));
    remainder[k] = quota - std::floor(quota);
    assigned += counts[k];
  }
  std::array<int, 3> idx = {0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::int64_t left = total - assigned, k = 0; left > 0; --left, ++k) {
    ++counts[idx[static_cast<std::size_t>(k)]];
  }
  return counts;
}

}  // namespace broodsim
