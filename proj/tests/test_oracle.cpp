#include <doctest.h>

#include <cmath>

#include "lotto/closed_form.hpp"
#include "lotto/oracle.hpp"
#include "support.hpp"

using namespace lotto;

namespace {

double prob_sum(const MixedStrategy& s) {
  // compensated sum; supports can run to thousands of entries
  double acc = 0.0, comp = 0.0;
  for (const auto& [idx, prob] : s.entries) {
    const double y = prob - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

}  // namespace

TEST_CASE("build_discretized derives kappa-based caps") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.05);
  CHECK(game.x_max_A == doctest::Approx(1.5571067811865476).epsilon(1e-12));
  CHECK(game.x_max_B == doctest::Approx(2.4106601717798214).epsilon(1e-12));
  CHECK(game.levels_A == 32);
  CHECK(game.levels_B == 49);
  CHECK(game.count_A == 32 * 32);
  CHECK(game.count_B == 49 * 49);
}

TEST_CASE("build_discretized rejects bad steps and oversized games") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  const auto p = proportional_preallocation(inst);
  CHECK_THROWS_WITH_AS(build_discretized(inst, p, 0.0),
                       doctest::Contains("InvalidStep"), Error);
  CHECK_THROWS_WITH_AS(build_discretized(inst, p, 1e-4),
                       doctest::Contains("TooLarge"), Error);

  const auto inst4 = make_instance({0.25, 0.25, 0.25, 0.25}, 1, 0.5, 1, 1);
  const auto p4 = proportional_preallocation(inst4);
  CHECK_THROWS_WITH_AS(build_discretized(inst4, p4, 0.1),
                       doctest::Contains("TooLarge"), Error);
}

TEST_CASE("budget cap fallback applies when kappas are unavailable") {
  const auto inst = make_instance({1.0}, 1, 1.0, 0.0, 1);  // R_A = 0
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.05);
  CHECK(game.x_max_A == doctest::Approx(2.0 * (1.0 + 0.0 + 1.0)));
  CHECK(game.x_max_B == game.x_max_A);

  const auto inst2 = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  const auto p2 = proportional_preallocation(inst2);
  const auto game2 =
      build_discretized(inst2, p2, 0.05, CapPolicy::Budget);
  CHECK(game2.x_max_A == doctest::Approx(5.0));
}

TEST_CASE("pure-strategy indexing round-trips") {
  const auto inst = make_instance({0.5, 0.3, 0.2}, 1, 0.3, 0.5, 0.5);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.1);
  for (std::int64_t idx : {std::int64_t{0}, game.count_A / 2, game.count_A - 1}) {
    double c = 0.0;
    for (int b = 0; b < inst.n; ++b)
      c += game.delta * game.digit(idx, b, Player::A);
    CHECK(c == doctest::Approx(game.cost(idx, Player::A)).epsilon(1e-15));
  }
}

TEST_CASE("best response against a sitting opponent takes the battlefield") {
  const auto inst = make_instance({1.0}, 1, 0.0, 1, 0.5);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.02);
  const MixedStrategy all_zero{{{0u, 1.0}}, 0.0};
  const auto br = best_response(game, all_zero, Player::A);
  CHECK(br.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(br.strategy.entries.size() == 1);
  CHECK(br.strategy.entries[0].first == 1u);  // one grid step beats zero
  CHECK(br.strategy.expected_cost == doctest::Approx(game.delta));
}

TEST_CASE("a starved best response keeps only its pre-allocation wins") {
  // with R_A = 0 the all-zero allocation is the only affordable play, so
  // the value is exactly the mass of battlefields where p_b alone wins
  const auto inst = make_instance({0.6, 0.4}, 1, 1.0, 0.0, 1.0);
  const auto p = make_preallocation(inst, {1.0, 0.0});
  const auto game = build_discretized(inst, p, 0.25);
  // B splits its budget evenly: q*x_B = 0.5 on each battlefield
  const std::uint32_t two = 2;
  const std::uint32_t b_idx = two + two * game.levels_B;
  REQUIRE(game.cost(b_idx, Player::B) == doctest::Approx(1.0));
  const MixedStrategy split{{{b_idx, 1.0}}, 1.0};
  const auto br = best_response(game, split, Player::A);
  CHECK(br.value == doctest::Approx(0.6).epsilon(1e-15));
  REQUIRE(br.strategy.entries.size() == 1);
  CHECK(br.strategy.entries[0].first == 0u);
  CHECK(br.strategy.expected_cost == 0.0);
}

TEST_CASE("best response dominates every feasible mixed strategy") {
  const auto inst = make_instance({0.6, 0.4}, 1.3, 0.4, 0.7, 0.9);
  const auto p = make_preallocation(inst, {0.3, 0.1});
  const auto game = build_discretized(inst, p, 0.1);
  test::Rng rng(17);
  // a fixed mixed opponent for B
  MixedStrategy opp;
  opp.entries = {{0u, 0.5},
                 {static_cast<std::uint32_t>(game.count_B / 3), 0.3},
                 {static_cast<std::uint32_t>(game.count_B - 1), 0.2}};
  const auto br = best_response(game, opp, Player::A);

  for (int trial = 0; trial < 200; ++trial) {
    // random feasible challenger: mix a cheap and an arbitrary strategy so
    // the expected cost lands under the budget
    std::uniform_int_distribution<std::int64_t> pick(0, game.count_A - 1);
    const std::uint32_t idx = static_cast<std::uint32_t>(pick(rng));
    const double cost = game.cost(idx, Player::A);
    double prob = test::uniform(rng, 0.0, 1.0);
    if (cost > 0.0) prob = std::fmin(prob, game.budget(Player::A) / cost);
    MixedStrategy challenger;
    challenger.entries = {{0u, 1.0 - prob}, {idx, prob}};
    challenger.expected_cost = prob * cost;
    const double value = expected_payoff_A(game, challenger, opp);
    CHECK(value <= br.value + 1e-12);
  }
}

TEST_CASE("saddle certificate on the classic one-battlefield game") {
  const auto inst = make_instance({1.0}, 1, 0.0, 1, 0.5);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.02);
  const auto cert = solve_saddle(game, 0.005, 200000, 3);
  CHECK(cert.converged);
  CHECK(cert.gap <= 0.005);
  CHECK(std::abs(cert.value - 0.75) <= 0.02);

  // certificate arithmetic: both strategies are budget-feasible
  // distributions and the gap bounds any best-response improvement
  CHECK(prob_sum(cert.sigma_A) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prob_sum(cert.sigma_B) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.sigma_A.expected_cost <= inst.RA + 1e-12);
  CHECK(cert.sigma_B.expected_cost <= inst.RB + 1e-12);

  const auto brA = best_response(game, cert.sigma_B, Player::A);
  const auto brB = best_response(game, cert.sigma_A, Player::B);
  CHECK(brA.value + brB.value - inst.W == doctest::Approx(cert.gap).epsilon(1e-9));
  CHECK(brA.value - cert.value <= cert.gap + 1e-12);
  const double played = expected_payoff_A(game, cert.sigma_A, cert.sigma_B);
  CHECK(played >= inst.W - brB.value - 1e-12);
  CHECK(played <= brA.value + 1e-12);
  CHECK(played == doctest::Approx(cert.value).epsilon(1e-12));
}

TEST_CASE("saddle value certifies the two-battlefield closed form") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  const auto p = proportional_preallocation(inst);
  const double closed = payoff_A(inst).value_A;

  const auto fine = build_discretized(inst, p, 0.05);
  const auto cert = solve_saddle(fine, 0.005, 200000, 1);
  CHECK(cert.converged);
  CHECK(std::abs(cert.value - closed) <= 0.02);

  // grid refinement tracked: coarser grid, same instance
  const auto coarse = build_discretized(inst, p, 0.1);
  const auto cert2 = solve_saddle(coarse, 0.005, 200000, 1);
  MESSAGE("deviation at delta=0.10: ", std::abs(cert2.value - closed),
          ", at delta=0.05: ", std::abs(cert.value - closed));
  CHECK(std::abs(cert2.value - closed) <= 0.05);
}

TEST_CASE("solver is deterministic and kernel-independent") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.2, 0.8, 1.0);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.1);

  const auto a = solve_saddle(game, 0.01, 50000, 42, Exec::Serial);
  const auto b = solve_saddle(game, 0.01, 50000, 42, Exec::Serial);
  CHECK(a.value == b.value);
  CHECK(a.gap == b.gap);
  CHECK(a.iterations == b.iterations);
  CHECK(a.sigma_A.entries == b.sigma_A.entries);
  CHECK(a.sigma_B.entries == b.sigma_B.entries);

  const auto c = solve_saddle(game, 0.01, 50000, 42, Exec::Parallel);
  CHECK(a.value == c.value);
  CHECK(a.gap == c.gap);
  CHECK(a.iterations == c.iterations);
  CHECK(a.sigma_A.entries == c.sigma_A.entries);
  CHECK(a.sigma_B.entries == c.sigma_B.entries);

  // a different seed still converges to the same game value
  const auto d = solve_saddle(game, 0.01, 50000, 7, Exec::Serial);
  CHECK(d.converged);
  CHECK(std::abs(d.value - a.value) <= 0.02 + 2 * 0.01);
}

TEST_CASE("tie rule moves the discretized value by at most O(delta)") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.0, 1, 1);
  const auto p = proportional_preallocation(inst);
  const double delta = 0.05;
  const auto b_wins = build_discretized(inst, p, delta, CapPolicy::Kappa,
                                        TieRule::BWins);
  const auto a_wins = build_discretized(inst, p, delta, CapPolicy::Kappa,
                                        TieRule::AWins);
  const auto coin = build_discretized(inst, p, delta);
  const auto vb = solve_saddle(b_wins, 0.005, 200000, 1);
  const auto va = solve_saddle(a_wins, 0.005, 200000, 1);
  const auto vc = solve_saddle(coin, 0.005, 200000, 1);
  MESSAGE("values: bwins=", vb.value, " awins=", va.value, " coin=", vc.value);
  CHECK(std::abs(va.value - vb.value) <= 4.0 * delta * inst.W);
  CHECK(vc.value >= std::fmin(va.value, vb.value) - 0.01);
  CHECK(vc.value <= std::fmax(va.value, vb.value) + 0.01);
  // the coin-flip value lands on the symmetric game's exact answer
  CHECK(std::abs(vc.value - 0.5) <= 0.01);
}

TEST_CASE("solver reports non-convergence honestly") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  const auto p = proportional_preallocation(inst);
  const auto game = build_discretized(inst, p, 0.05);
  const auto cert = solve_saddle(game, 1e-9, 50, 1);
  CHECK_FALSE(cert.converged);
  CHECK(cert.gap > 1e-9);
  // the certificate still bounds the value it reports
  const auto brA = best_response(game, cert.sigma_B, Player::A);
  const auto brB = best_response(game, cert.sigma_A, Player::B);
  CHECK(brA.value + brB.value - inst.W <= cert.gap + 1e-12);
}
