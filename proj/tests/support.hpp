#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "capgame/model.hpp"

namespace capgame::testing {

struct FirmSpec {
  double a, b, price_cap, gamma;
};

Instance make_instance(const std::vector<FirmSpec> &firms, double demand = 1.0);
Profile make_profile(const std::vector<Strategy> &strategies);

/// a = (1, 2), b = (1, 1), C = (10, 10), gamma = (0.25, 0.25).
Instance two_firm_example();
/// Two firms with a = gamma = C = 1, b = 0.
Instance g1();

/// Random instances: every parameter log-uniform in [0.1, 10], b = 0 with
/// probability 1/4 so both activation branches show up.
class Generator {
public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double log_uniform(double lo, double hi);
  double uniform(double lo, double hi);
  std::size_t pick(std::size_t lo, std::size_t hi); // inclusive

  FirmParams firm();
  Instance instance(std::size_t n, double demand = 1.0);
  /// z in [0, C/gamma], p in [0, C]; at least two firms keep z > 0.
  Profile profile(const Instance &instance);

private:
  std::mt19937_64 rng_;
};

bool close(double a, double b, double rel, double abs = 0.0);

} // namespace capgame::testing
