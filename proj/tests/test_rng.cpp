#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "broodsim/rng.hpp"

using namespace broodsim;

TEST_CASE("streams are reproducible") {
  StreamRng a(42, 1, 2, 3);
  StreamRng b(42, 1, 2, 3);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct keys give distinct streams") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t agent = 0; agent < 1000; ++agent) {
    firsts.insert(StreamRng(42, 7, 1, agent).next_u64());
  }
  CHECK(firsts.size() == 1000);

  // Any key position separates streams.
  CHECK(StreamRng(1, 0, 0, 0).next_u64() != StreamRng(2, 0, 0, 0).next_u64());
  CHECK(StreamRng(1, 1, 0, 0).next_u64() != StreamRng(1, 0, 1, 0).next_u64());
  CHECK(StreamRng(1, 0, 0, 1).next_u64() != StreamRng(1, 0, 0, 2).next_u64());
}

TEST_CASE("next_unit is uniform-ish on [0, 1)") {
  StreamRng rng(7, 0, 0, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("next_below is in range and roughly balanced") {
  StreamRng rng(9, 0, 0, 0);
  std::vector<int> histogram(6, 0);
  const int n = 60000;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t v = rng.next_below(6);
    REQUIRE(v < 6);
    ++histogram[static_cast<std::size_t>(v)];
  }
  for (const int count : histogram) {
    CHECK(count > 9500);
    CHECK(count < 10500);
  }
}

TEST_CASE("derive_seed separates work units") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t unit = 0; unit < 10000; ++unit) {
    seeds.insert(derive_seed(123, 0x1157, unit));
  }
  CHECK(seeds.size() == 10000);
  CHECK(derive_seed(123, 1, 0) != derive_seed(123, 2, 0));
  CHECK(derive_seed(123, 1, 0) == derive_seed(123, 1, 0));
}
