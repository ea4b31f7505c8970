#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "broodsim/rng.hpp"
#include "broodsim/simplex_grid.hpp"

using namespace broodsim;

TEST_CASE("lattice size and canonical order") {
  CHECK(lattice_size(2) == 6);
  CHECK(lattice_size(15) == 136);

  const auto pts = barycentric_lattice(2);
  REQUIRE(pts.size() == 6);
  // a descending, then b descending: (1,0,0), (.5,.5,0), (.5,0,.5), (0,1,0)...
  CHECK(pts[0].sitters() == 1.0);
  CHECK(pts[1].sitters() == 0.5);
  CHECK(pts[1].identifiers() == 0.5);
  CHECK(pts[2].sitters() == 0.5);
  CHECK(pts[2].cheaters() == 0.5);
  CHECK(pts[3].identifiers() == 1.0);
  CHECK(pts[5].cheaters() == 1.0);

  CHECK(barycentric_lattice(15).size() == 136);
  CHECK_THROWS_AS(barycentric_lattice(0), DomainError);
}

TEST_CASE("lattice points sit on the grid") {
  const std::int64_t m = 9;
  for (const SimplexPoint& p : barycentric_lattice(m)) {
    for (const double c : p.as_array()) {
      const double scaled = c * static_cast<double>(m);
      CHECK(std::abs(scaled - std::round(scaled)) <= 1e-9);
    }
  }
}

TEST_CASE("largest-remainder apportionment") {
  const auto ne = apportion_largest_remainder(SimplexPoint(0.25, 0.25, 0.5), 400);
  CHECK(ne[0] == 100);
  CHECK(ne[1] == 100);
  CHECK(ne[2] == 200);

  // Equal remainders break ties toward the lower index.
  const auto thirds =
      apportion_largest_remainder(SimplexPoint(1.0 / 3, 1.0 / 3, 1.0 / 3), 10);
  CHECK(thirds[0] == 4);
  CHECK(thirds[1] == 3);
  CHECK(thirds[2] == 3);

  CHECK_THROWS_AS(apportion_largest_remainder(SimplexPoint(1, 0, 0), 0), DomainError);
}

TEST_CASE("apportionment preserves the total and stays within one of quota") {
  StreamRng rng(0xa9904, 0, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = rng.next_unit();
    const double b = rng.next_unit();
    const double c = rng.next_unit();
    const double s = a + b + c;
    if (s <= 0.0) continue;
    const SimplexPoint p(a / s, b / s, c / s);
    const auto total = static_cast<std::int64_t>(1 + rng.next_below(2000));
    const auto counts = apportion_largest_remainder(p, total);
    CHECK(counts[0] + counts[1] + counts[2] == total);
    const auto arr = p.as_array();
    for (int k = 0; k < 3; ++k) {
      CHECK(counts[k] >= 0);
      const double quota = arr[static_cast<std::size_t>(k)] * static_cast<double>(total);
      CHECK(std::abs(static_cast<double>(counts[static_cast<std::size_t>(k)]) - quota) < 1.0);
    }
  }
}
