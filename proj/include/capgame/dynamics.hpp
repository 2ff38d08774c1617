#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "capgame/model.hpp"

namespace capgame {

struct DynamicsOptions {
  /// Capacity played when no best response exists (all opponents idle): the
  /// profit supremum is approached by (delta, C) but never attained.
  double empty_response_capacity = 1e-3;
};

/// Replaces one firm's strategy by its best response. A zero-capacity
/// best-response segment is played as (0, C).
Profile best_response_step(const Instance &instance, const Profile &profile,
                           std::size_t firm,
                           const DynamicsOptions &options = {});

struct MoveOrder {
  enum class Kind { RoundRobin, Random } kind = Kind::RoundRobin;
  std::uint64_t seed = 0;

  static MoveOrder round_robin() { return {}; }
  static MoveOrder random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

enum class Termination { Converged, MaxIters, StuckEmptyBr };

const char *to_string(Termination reason);

struct TraceStep {
  std::size_t round = 0;
  std::size_t firm = 0;
  Strategy strategy;
  double profit_before = 0.0;
  double profit_after = 0.0;
  double change = 0.0; // max(|dz|, |dp|) of the mover
};

struct Trace {
  std::vector<Profile> profiles; // profiles[k + 1] follows steps[k]
  std::vector<TraceStep> steps;
  std::vector<double> round_max_change;
  Termination reason = Termination::MaxIters;
  std::size_t rounds = 0;

  const Profile &final_profile() const { return profiles.back(); }
};

/// Sequential best-response dynamics. One iteration is a full round in which
/// every firm moves once; stops when a round's largest strategy change is
/// below `tol` or after `max_rounds` rounds. Convergence is empirical only.
Trace run_dynamics(const Instance &instance, const Profile &initial,
                   MoveOrder order, std::size_t max_rounds, double tol,
                   const DynamicsOptions &options = {});

/// Uniform draw of z in [0, C/gamma] and p in [0, C] per firm.
Profile random_profile(const Instance &instance, std::uint64_t seed);

} // namespace capgame
