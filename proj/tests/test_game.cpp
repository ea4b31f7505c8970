#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "broodsim/game.hpp"
#include "broodsim/rng.hpp"

using namespace broodsim;

namespace {

GameParams canonical() { return GameParams(2.0, 0.5, 0.5); }

// Uniform in (0, 3].
double draw_param(StreamRng& rng) { return 3.0 * (1.0 - rng.next_unit()); }

GameParams random_valid_params(StreamRng& rng) {
  for (;;) {
    const double h = draw_param(rng);
    const double e = draw_param(rng);
    const double i = draw_param(rng);
    if (h - e - i > 0.0) return GameParams(h, e, i);
  }
}

SimplexPoint random_interior(StreamRng& rng) {
  for (;;) {
    const double a = rng.next_unit();
    const double b = rng.next_unit();
    const double c = rng.next_unit();
    const double s = a + b + c;
    if (s <= 0.0) continue;
    SimplexPoint p(a / s, b / s, c / s);
    if (p.is_interior()) return p;
  }
}

}  // namespace

TEST_CASE("game parameters validate") {
  CHECK_THROWS_AS(GameParams(0.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(GameParams(2.0, -0.5, 0.5), DomainError);
  CHECK_THROWS_AS(GameParams(2.0, 0.5, 0.0), DomainError);
  CHECK(canonical().interior_ne_exists());
  CHECK_FALSE(GameParams(1.0, 0.6, 0.5).interior_ne_exists());
}

TEST_CASE("simplex point validation and normalization") {
  CHECK_THROWS_AS(SimplexPoint(0.5, 0.6, 0.2), DomainError);
  CHECK_THROWS_AS(SimplexPoint(-0.1, 0.6, 0.5), DomainError);
  CHECK_THROWS_AS(SimplexPoint(std::nan(""), 0.5, 0.5), DomainError);

  // Drift within tolerance is clipped and renormalized.
  const SimplexPoint p(0.25 + 5e-10, 0.25, 0.5);
  CHECK(p.sitters() + p.identifiers() + p.cheaters() == doctest::Approx(1.0).epsilon(1e-15));
  const SimplexPoint q(-5e-13, 0.5, 0.5);
  CHECK(q.sitters() == 0.0);

  CHECK(SimplexPoint(0.0, 0.0, 1.0).is_all_cheater());
  CHECK_FALSE(SimplexPoint(0.0, 0.5, 0.5).is_interior());
  CHECK(SimplexPoint(0.2, 0.3, 0.5).is_interior());
}

TEST_CASE("expected payoffs match the closed forms") {
  const GameParams g = canonical();

  const PayoffVector at_ne = expected_payoffs(SimplexPoint(0.25, 0.25, 0.5), g);
  CHECK(at_ne.sitter.value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at_ne.identifier == 1.0);
  CHECK(at_ne.cheater == doctest::Approx(1.0).epsilon(1e-14));

  const PayoffVector at_s = expected_payoffs(SimplexPoint(1.0, 0.0, 0.0), g);
  CHECK(at_s.sitter.value() == 1.5);
  CHECK(at_s.identifier == 1.0);
  CHECK(at_s.cheater == 2.0);

  const PayoffVector mid = expected_payoffs(SimplexPoint(0.5, 0.25, 0.25), g);
  CHECK(mid.sitter.value() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(mid.cheater == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("all-cheater payoffs use the sentinel convention") {
  const PayoffVector p = expected_payoffs(SimplexPoint(0.0, 0.0, 1.0), canonical());
  CHECK(p.sitter.is_neg_infinity());
  CHECK(p.identifier == 1.0);
  CHECK(p.cheater == 0.0);

  // The sentinel orders below every finite payoff but refuses arithmetic.
  CHECK(p.sitter < -1e300);
  CHECK(p.sitter < SitterPayoff::finite(-1e300));
  CHECK_FALSE(-1e300 < p.sitter);
  CHECK(p.sitter == SitterPayoff::neg_infinity());
  CHECK_THROWS_AS(p.sitter.value(), DomainError);
}

TEST_CASE("nash equilibrium closed form") {
  const SimplexPoint ne = nash_equilibrium(canonical());
  CHECK(std::abs(ne.sitters() - 0.25) <= 1e-12);
  CHECK(std::abs(ne.identifiers() - 0.25) <= 1e-12);
  CHECK(std::abs(ne.cheaters() - 0.5) <= 1e-12);

  const SimplexPoint ne2 = nash_equilibrium(GameParams(1.0, 0.2, 0.3));
  CHECK(std::abs(ne2.sitters() - 0.2) <= 1e-12);
  CHECK(std::abs(ne2.identifiers() - 0.2) <= 1e-12);
  CHECK(std::abs(ne2.cheaters() - 0.6) <= 1e-12);
  const PayoffVector p = expected_payoffs(ne2, GameParams(1.0, 0.2, 0.3));
  CHECK(p.sitter.value() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p.identifier == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p.cheater == doctest::Approx(0.5).epsilon(1e-13));

  CHECK_THROWS_AS(nash_equilibrium(GameParams(1.0, 0.6, 0.5)), NoInteriorEquilibrium);
}

TEST_CASE("payoff residual") {
  const GameParams g = canonical();
  CHECK(payoff_residual(nash_equilibrium(g), g) <= 1e-12);
  CHECK(payoff_residual(SimplexPoint(0.5, 0.25, 0.25), g) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(payoff_residual(SimplexPoint(1.0 / 3, 1.0 / 3, 1.0 / 3), g) ==
        doctest::Approx(0.25).epsilon(1e-13));
  CHECK_THROWS_AS(payoff_residual(SimplexPoint(0.5, 0.5, 0.0), g), DomainError);
  CHECK_THROWS_AS(payoff_residual(SimplexPoint(0.0, 0.0, 1.0), g), DomainError);
}

TEST_CASE("equilibrium properties over random parameters") {
  StreamRng rng(0xbead5151u, 1, 2, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const GameParams g = random_valid_params(rng);
    const SimplexPoint ne = nash_equilibrium(g);
    CHECK(std::abs(ne.sitters() + ne.identifiers() + ne.cheaters() - 1.0) <= 1e-12);
    CHECK(ne.is_interior());
    CHECK(payoff_residual(ne, g) <= 1e-10);
  }
}

TEST_CASE("payoff identities at random interior points") {
  StreamRng rng(0x5eed, 4, 5, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const GameParams g = random_valid_params(rng);
    const SimplexPoint p = random_interior(rng);
    const PayoffVector pay = expected_payoffs(p, g);
    // The identifier payoff is the deterministic h - e - i, bit for bit.
    CHECK(pay.identifier == g.hatch_reward - g.sit_cost - g.identify_cost);
    // Algebraic rearrangement of the sitter payoff.
    const double reconstructed =
        pay.sitter.value() +
        g.sit_cost * (1.0 + p.cheaters() / (p.sitters() + p.identifiers()));
    CHECK(std::abs(reconstructed - g.hatch_reward) <= 1e-12);
    CHECK(pay.cheater >= 0.0);
    CHECK(pay.cheater <= g.hatch_reward);
  }
}

TEST_CASE("payoffs scale with the parameters, the equilibrium does not") {
  StreamRng rng(0x5ca1e, 7, 8, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const GameParams g = random_valid_params(rng);
    const double c = 0.1 + 5.0 * rng.next_unit();
    const GameParams scaled(c * g.hatch_reward, c * g.sit_cost, c * g.identify_cost);
    const SimplexPoint p = random_interior(rng);

    const PayoffVector base = expected_payoffs(p, g);
    const PayoffVector big = expected_payoffs(p, scaled);
    CHECK(big.sitter.value() ==
          doctest::Approx(c * base.sitter.value()).epsilon(1e-12));
    CHECK(big.identifier == doctest::Approx(c * base.identifier).epsilon(1e-12));
    CHECK(big.cheater == doctest::Approx(c * base.cheater).epsilon(1e-12));

    const SimplexPoint ne = nash_equilibrium(g);
    const SimplexPoint ne_scaled = nash_equilibrium(scaled);
    CHECK(std::abs(ne.sitters() - ne_scaled.sitters()) <= 1e-12);
    CHECK(std::abs(ne.identifiers() - ne_scaled.identifiers()) <= 1e-12);
    CHECK(std::abs(ne.cheaters() - ne_scaled.cheaters()) <= 1e-12);
  }
}
