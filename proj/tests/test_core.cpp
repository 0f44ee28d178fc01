#include <doctest.h>

#include <cmath>

#include "lotto/json_io.hpp"
#include "lotto/types.hpp"
#include "support.hpp"

using namespace lotto;
using test::Rng;

TEST_CASE("make_instance validates and caches W") {
  const GameInstance a = make_instance({0.5, 0.5}, 1.0, 0.5, 1.0, 1.0);
  CHECK(a.n == 2);
  CHECK(a.W == 1.0);

  const GameInstance b = make_instance({2.0}, 0.5, 0.0, 1.0, 3.0);
  CHECK(b.n == 1);
  CHECK(b.W == 2.0);
}

TEST_CASE("make_instance rejects bad fields by name") {
  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::TooLarge;  // sentinel: no throw
  };
  CHECK(code_of([] { make_instance({0.5, -0.5}, 1, 0.5, 1, 1); }) ==
        Errc::NonPositiveWeight);
  CHECK(code_of([] { make_instance({0.5, 0.0}, 1, 0.5, 1, 1); }) ==
        Errc::NonPositiveWeight);
  CHECK(code_of([] { make_instance({1.0}, 0.0, 0.5, 1, 1); }) ==
        Errc::NonPositiveQ);
  CHECK(code_of([] { make_instance({1.0}, 1, -0.1, 1, 1); }) ==
        Errc::NegativeBudget);
  CHECK(code_of([] { make_instance({1.0}, 1, 0.5, -1, 1); }) ==
        Errc::NegativeBudget);
  CHECK(code_of([] { make_instance({1.0}, 1, 0.5, 1, 0.0); }) ==
        Errc::NonPositiveRB);
  CHECK(code_of([] { make_instance({}, 1, 0.5, 1, 1); }) ==
        Errc::EmptyBattlefields);
  CHECK_THROWS_WITH_AS(make_instance({0.5, -0.5}, 1, 0.5, 1, 1),
                       doctest::Contains("NonPositiveWeight"), Error);
}

TEST_CASE("zero-budget degenerate instances are valid") {
  const GameInstance inst = make_instance({1.0}, 1.0, 0.0, 0.0, 1.0);
  CHECK(inst.P == 0.0);
  CHECK(inst.RA == 0.0);
}

TEST_CASE("proportional_preallocation worked examples") {
  {
    const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
    const auto p = proportional_preallocation(inst);
    CHECK(p.p[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.p[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  {
    const auto inst = make_instance({2.0}, 0.5, 3.0, 1, 1);
    const auto p = proportional_preallocation(inst);
    CHECK(p.p[0] == doctest::Approx(3.0).epsilon(1e-15));
  }
  {
    const auto inst = make_instance({0.2, 0.3, 0.5}, 1, 1.0, 1, 1);
    const auto p = proportional_preallocation(inst);
    CHECK(p.p[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(p.p[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(p.p[2] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("proportional output passes the PreAllocation invariants") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = test::random_instance(rng, 1 + trial % 3);
    const auto p = proportional_preallocation(inst);
    CHECK_NOTHROW(make_preallocation(inst, p.p));
    for (double x : p.p) CHECK(x >= 0.0);
  }
}

TEST_CASE("make_preallocation rejects off-simplex vectors") {
  const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
  CHECK_THROWS_AS(make_preallocation(inst, {0.5, 0.1}), Error);
  CHECK_THROWS_AS(make_preallocation(inst, {0.6, -0.1}), Error);
  CHECK_THROWS_AS(make_preallocation(inst, {0.5}), Error);
  CHECK_NOTHROW(make_preallocation(inst, {0.5, 0.0}));
}

TEST_CASE("weighted_norm_sq worked examples") {
  {
    const auto inst = make_instance({0.5, 0.5}, 1, 0.5, 1, 1);
    CHECK(weighted_norm_sq(inst, make_preallocation(inst, {0.25, 0.25})) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(weighted_norm_sq(inst, make_preallocation(inst, {0.5, 0.0})) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }
  {
    const auto inst = make_instance({1.0}, 1, 2.0, 1, 1);
    CHECK(weighted_norm_sq(inst, make_preallocation(inst, {2.0})) ==
          doctest::Approx(4.0).epsilon(1e-14));
  }
}

TEST_CASE("weighted norm is minimized exactly by the proportional point") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = test::random_instance(rng, 2 + trial % 2);
    const double floor = inst.P * inst.P / inst.W;
    const auto p = test::random_preallocation(rng, inst);
    CHECK(weighted_norm_sq(inst, p) >= floor - 1e-12 * (1.0 + floor));

    const auto star = proportional_preallocation(inst);
    CHECK(weighted_norm_sq(inst, star) ==
          doctest::Approx(floor).epsilon(1e-12));

    // equality only when the ratios p_b/w_b are constant
    double rmin = 1e300, rmax = -1e300;
    for (int b = 0; b < inst.n; ++b) {
      const double r = p.p[b] / inst.w[b];
      rmin = std::fmin(rmin, r);
      rmax = std::fmax(rmax, r);
    }
    if (inst.P > 0.1 && rmax - rmin > 1e-3)
      CHECK(weighted_norm_sq(inst, p) > floor * (1.0 + 1e-9));
  }
}

TEST_CASE("instance and pre-allocation JSON round trip") {
  const auto inst = make_instance({0.5, 1.5, 2.0}, 0.7, 0.9, 1.1, 1.3);
  const auto p = proportional_preallocation(inst);
  const auto j = preallocation_to_json(inst, p);
  CHECK(j.at("n") == 3);
  CHECK(j.at("R_A") == 1.1);

  const GameInstance back = instance_from_json(j);
  CHECK(back.w == inst.w);
  CHECK(back.q == inst.q);
  CHECK(back.P == inst.P);
  CHECK(back.RA == inst.RA);
  CHECK(back.RB == inst.RB);
  CHECK(back.W == inst.W);
  const PreAllocation pback = preallocation_from_json(back, j);
  CHECK(pback.p == p.p);
}
