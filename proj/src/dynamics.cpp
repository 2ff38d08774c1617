#include "capgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "capgame/best_response.hpp"

namespace capgame {

const char *to_string(Termination reason) {
  switch (reason) {
  case Termination::Converged: return "converged";
  case Termination::MaxIters: return "max_iters";
  case Termination::StuckEmptyBr: return "stuck_empty_br";
  }
  return "unknown";
}

namespace {

struct Move {
  Strategy strategy;
  bool empty_fallback = false;
};

Move response_move(const Instance &instance, const Profile &profile,
                   std::size_t firm, const DynamicsOptions &options) {
  const double cap = instance.params(firm).price_cap;
  const BestResponseSet br = best_response(instance, profile, firm);
  if (const auto *u = std::get_if<UniqueResponse>(&br)) return {u->strategy};
  if (std::holds_alternative<ZeroCapacitySegment>(br)) return {{0.0, cap}};
  return {{options.empty_response_capacity, cap}, true};
}

} // namespace

Profile best_response_step(const Instance &instance, const Profile &profile,
                           std::size_t firm, const DynamicsOptions &options) {
  Profile next = profile;
  next[firm] = response_move(instance, profile, firm, options).strategy;
  return next;
}

Trace run_dynamics(const Instance &instance, const Profile &initial,
                   MoveOrder order, std::size_t max_rounds, double tol,
                   const DynamicsOptions &options) {
  validate_profile(instance, initial);
  Trace trace;
  trace.profiles.push_back(initial);
  std::mt19937_64 rng(order.seed);
  std::vector<std::size_t> movers(instance.size());
  std::iota(movers.begin(), movers.end(), std::size_t{0});

  Profile current = initial;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (order.kind == MoveOrder::Kind::Random) {
      std::shuffle(movers.begin(), movers.end(), rng);
    }
    double round_change = 0.0;
    bool empty_fallback = false;
    for (std::size_t firm : movers) {
      const double before =
          current.any_capacity() ? profit(instance, current)[firm] : 0.0;
      const Move move = response_move(instance, current, firm, options);
      empty_fallback = empty_fallback || move.empty_fallback;
      const Strategy old = current[firm];
      current[firm] = move.strategy;
      const double after = profit(instance, current)[firm];
      const double change = std::max(std::abs(move.strategy.z - old.z),
                                     std::abs(move.strategy.p - old.p));
      round_change = std::max(round_change, change);
      trace.steps.push_back(
          {round, firm, move.strategy, before, after, change});
      trace.profiles.push_back(current);
    }
    trace.round_max_change.push_back(round_change);
    trace.rounds = round + 1;
    if (round_change < tol) {
      trace.reason =
          empty_fallback ? Termination::StuckEmptyBr : Termination::Converged;
      return trace;
    }
  }
  trace.reason = Termination::MaxIters;
  return trace;
}

Profile random_profile(const Instance &instance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Profile out;
  for (const Firm &f : instance.firms) {
    const double z = unit(rng) * f.params.capacity_bound();
    const double p = unit(rng) * f.params.price_cap;
    out.strategies.push_back({z, p});
  }
  return out;
}

} // namespace capgame
