#include <doctest.h>

#include <cmath>
#include <numeric>

#include "capgame/wardrop.hpp"
#include "support.hpp"

using namespace capgame;
using namespace capgame::testing;

TEST_CASE("example flows") {
  const Instance inst = two_firm_example();
  SUBCASE("equal effective costs") {
    const WardropOutcome w = wardrop_flow(inst, make_profile({{1, 1}, {2, 1}}));
    CHECK(std::abs(w.x[0] - 0.5) <= 1e-12);
    CHECK(std::abs(w.x[1] - 0.5) <= 1e-12);
    CHECK(w.K == doctest::Approx(2.5));
  }
  SUBCASE("one firm priced out") {
    const Profile s = make_profile({{1, 1}, {1, 5.5}});
    const WardropOutcome w = wardrop_flow(inst, s);
    CHECK(w.x[0] == 1.0);
    CHECK(w.x[1] == 0.0);
    CHECK(w.K == doctest::Approx(3.0));
    CHECK(effective_cost(inst.params(1), s[1], 0.0) == doctest::Approx(6.5));
  }
  SUBCASE("single served firm") {
    const WardropOutcome w = wardrop_flow(inst, make_profile({{1, 4}, {0, 1}}));
    CHECK(w.x[0] == 1.0);
    CHECK(w.x[1] == 0.0);
    CHECK(w.K == doctest::Approx(1 + 1 + 4));
  }
  CHECK(routing_cost(inst, make_profile({{1, 1}, {2, 1}})) ==
        doctest::Approx(2.5));
}

TEST_CASE("no capacity anywhere") {
  const Instance inst = two_firm_example();
  try {
    wardrop_flow(inst, make_profile({{0, 1}, {0, 1}}));
    FAIL("expected AllCapacitiesZero");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::AllCapacitiesZero);
  }
}

TEST_CASE("beckmann potential") {
  const Instance inst = two_firm_example();
  const Profile s = make_profile({{1, 1}, {2, 1}});
  const double eq[] = {0.5, 0.5};
  const double corner[] = {1.0, 0.0};
  // (1/2)(0.25) + 2(0.5) + (2/4)(0.25) + 2(0.5)
  CHECK(beckmann_potential(inst, s, eq) == doctest::Approx(2.25));
  CHECK(beckmann_potential(inst, s, corner) == doctest::Approx(2.5));
  const Profile single = make_profile({{1, 0}, {0, 0}});
  CHECK(beckmann_potential(inst, single, corner) == doctest::Approx(0.5 + 1));
  const double bad[] = {0.5, 0.5};
  try {
    beckmann_potential(inst, single, bad);
    FAIL("expected FlowOnZeroCapacity");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::FlowOnZeroCapacity);
  }
}

TEST_CASE("tied entry costs activate together") {
  const Instance inst = make_instance({{1, 1, 5, 1}, {1, 0, 5, 1}, {2, 2, 5, 1}});
  const Profile s = make_profile({{1, 1}, {1, 2}, {2, 0}});
  const WardropOutcome w = wardrop_flow(inst, s);
  CHECK(w.x[0] == doctest::Approx(1.0 / 3));
  CHECK(w.x[1] == doctest::Approx(1.0 / 3));
  CHECK(w.x[2] == doctest::Approx(1.0 / 3));
  CHECK(w.K == doctest::Approx(2 + 1.0 / 3));
}

TEST_CASE("complementarity and exact mass on random profiles") {
  Generator gen(101);
  for (int t = 0; t < 1000; ++t) {
    const Instance inst = gen.instance(gen.pick(2, 6), gen.log_uniform(0.3, 3));
    const Profile s = gen.profile(inst);
    const WardropOutcome w = wardrop_flow(inst, s);
    const double mass = std::accumulate(w.x.begin(), w.x.end(), 0.0);
    CHECK(std::abs(mass - inst.demand) <= 1e-12 * std::max(1.0, inst.demand));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      CHECK(w.x[i] >= 0.0);
      if (s[i].z == 0) {
        CHECK(w.x[i] == 0.0);
        continue;
      }
      const double c = effective_cost(inst.params(i), s[i], w.x[i]);
      CHECK(std::abs(w.x[i] * (c - w.K)) <= 1e-9);
      CHECK(c - w.K >= -1e-9);
    }
  }
}

TEST_CASE("wardrop flow minimizes the potential") {
  Generator gen(7);
  for (int t = 0; t < 1000; ++t) {
    const Instance inst = gen.instance(gen.pick(2, 4));
    const Profile s = gen.profile(inst);
    const WardropOutcome w = wardrop_flow(inst, s);
    const double best = beckmann_potential(inst, s, w.x);
    std::vector<double> y(inst.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (s[i].z > 0) {
        y[i] = gen.uniform(0, 1);
        total += y[i];
      }
    }
    for (double &v : y) v /= total;
    CHECK(beckmann_potential(inst, s, y) >= best - 1e-9);
  }
}

TEST_CASE("raising a price lowers own flow and raises the routing cost") {
  Generator gen(13);
  for (int t = 0; t < 500; ++t) {
    const Instance inst = gen.instance(gen.pick(2, 5));
    Profile s = gen.profile(inst);
    const std::size_t i = gen.pick(0, inst.size() - 1);
    const FirmParams &f = inst.params(i);
    s[i].p = gen.uniform(0, f.price_cap);
    const WardropOutcome before = wardrop_flow(inst, s);
    s[i].p = gen.uniform(s[i].p, f.price_cap);
    const WardropOutcome after = wardrop_flow(inst, s);
    CHECK(after.x[i] <= before.x[i] + 1e-12);
    CHECK(after.K >= before.K - 1e-12);
  }
}

TEST_CASE("fill level on explicit breakpoints") {
  const std::vector<Breakpoint> bps = {{0, 1.0, 0.25}};
  const FillLevel f = solve_fill_level(bps, 1.0);
  CHECK(f.level == doctest::Approx(5.0));
  CHECK(f.active == 1);
  const std::vector<Breakpoint> two = {{0, 1.0, 1.0}, {1, 3.0, 1.0}};
  CHECK(solve_fill_level(two, 1.0).level == doctest::Approx(2.0));
  CHECK(solve_fill_level(two, 4.0).level == doctest::Approx(4.0));
  CHECK(solve_fill_level(two, 4.0).active == 2);
}
