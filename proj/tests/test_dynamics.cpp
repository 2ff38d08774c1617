#include <doctest.h>

#include <cmath>

#include "capgame/dynamics.hpp"
#include "capgame/equilibrium.hpp"
#include "support.hpp"

using namespace capgame;
using namespace capgame::testing;

TEST_CASE("single steps") {
  const Instance inst = g1();
  const Profile next =
      best_response_step(inst, make_profile({{1, 1}, {0.25, 1}}), 0);
  CHECK(next[0].z == doctest::Approx(0.25));
  CHECK(next[0].p == doctest::Approx(1.0));
  CHECK(next[1].z == 0.25);

  const Profile idle = best_response_step(inst, make_profile({{0, 0}, {0, 0}}), 0);
  CHECK(idle[0].z == 1e-3);
  CHECK(idle[0].p == 1.0);

  DynamicsOptions wide;
  wide.empty_response_capacity = 0.1;
  CHECK(best_response_step(inst, make_profile({{0, 0}, {0, 0}}), 0, wide)[0].z ==
        0.1);

  const Profile eq = solve_equilibrium(inst).profile();
  for (std::size_t i = 0; i < 2; ++i) {
    const Profile moved = best_response_step(inst, eq, i);
    CHECK(std::abs(moved[i].z - eq[i].z) <= 1e-9);
    CHECK(std::abs(moved[i].p - eq[i].p) <= 1e-9);
  }
}

TEST_CASE("dynamics converge on the symmetric game") {
  const Instance inst = g1();
  const Trace t = run_dynamics(inst, make_profile({{0.5, 0.5}, {0.5, 0.5}}),
                               MoveOrder::round_robin(), 200, 1e-12);
  CHECK(t.reason == Termination::Converged);
  const Profile &last = t.final_profile();
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(last[i].z - 0.25) <= 1e-6);
    CHECK(std::abs(last[i].p - 1.0) <= 1e-6);
  }
  CHECK(verify_equilibrium(inst, last).passed());
}

TEST_CASE("starting at the equilibrium converges at once") {
  const Instance inst = two_firm_example();
  const Profile eq = solve_equilibrium(inst).profile();
  const Trace t = run_dynamics(inst, eq, MoveOrder::round_robin(), 10, 1e-9);
  CHECK(t.reason == Termination::Converged);
  CHECK(t.rounds == 1);
  CHECK(t.round_max_change[0] < 1e-9);
}

TEST_CASE("zero rounds") {
  const Profile init = make_profile({{1, 1}, {1, 1}});
  const Trace t = run_dynamics(g1(), init, MoveOrder::round_robin(), 0, 1e-9);
  CHECK(t.reason == Termination::MaxIters);
  CHECK(t.profiles.size() == 1);
  CHECK(t.steps.empty());
}

TEST_CASE("idle opponents leave the dynamics stuck") {
  const Instance inst = g1();
  const Trace t = run_dynamics(inst, make_profile({{0, 0}, {0, 0}}),
                               MoveOrder::round_robin(), 50, 1e-9);
  // Once both firms hold capacity the game is regular again.
  CHECK(t.reason != Termination::StuckEmptyBr);
  CHECK(to_string(Termination::StuckEmptyBr) == std::string("stuck_empty_br"));
}

TEST_CASE("trace invariants on random games") {
  Generator gen(61);
  for (int k = 0; k < 40; ++k) {
    const Instance inst = gen.instance(gen.pick(2, 4));
    const MoveOrder order =
        k % 2 ? MoveOrder::random(k) : MoveOrder::round_robin();
    const Trace t = run_dynamics(inst, gen.profile(inst), order, 30, 1e-10);
    REQUIRE(t.profiles.size() == t.steps.size() + 1);
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
      const Profile &a = t.profiles[s];
      const Profile &b = t.profiles[s + 1];
      for (std::size_t i = 0; i < inst.size(); ++i) {
        if (i == t.steps[s].firm) continue;
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].p == b[i].p);
      }
      CHECK(t.steps[s].profit_after >= t.steps[s].profit_before - 1e-9);
    }
    if (t.reason == Termination::Converged) {
      CHECK(verify_equilibrium(inst, t.final_profile()).passed());
    }
  }
}

TEST_CASE("random order is reproducible") {
  const Instance inst = two_firm_example();
  const Profile init = random_profile(inst, 4);
  const Trace a = run_dynamics(inst, init, MoveOrder::random(9), 20, 1e-12);
  const Trace b = run_dynamics(inst, init, MoveOrder::random(9), 20, 1e-12);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t s = 0; s < a.steps.size(); ++s) {
    CHECK(a.steps[s].firm == b.steps[s].firm);
    CHECK(a.steps[s].strategy.z == b.steps[s].strategy.z);
  }
}
