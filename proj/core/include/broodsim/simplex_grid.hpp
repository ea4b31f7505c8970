#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "broodsim/game.hpp"

namespace broodsim {

// Number of barycentric lattice points (a/m, b/m, c/m), a+b+c = m.
inline constexpr std::int64_t lattice_size(std::int64_t order) noexcept {
  return (order + 1) * (order + 2) / 2;
}

// All lattice points of the given order in canonical row order: a descending,
// then b descending. The first point is the all-sitter vertex, the last the
// all-cheater vertex.
std::vector<SimplexPoint> barycentric_lattice(std::int64_t order);

// Round proportions to integer counts summing to `total` by largest-remainder
// apportionment (floors first, then +1 by descending fractional part; ties go
// to the lower index).
std::array<std::int64_t, 3> apportion_largest_remainder(const SimplexPoint& point,
                                                        std::int64_t total);

}  // namespace broodsim
