#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace capgame::testing {

Instance make_instance(const std::vector<FirmSpec> &firms, double demand) {
  RawInstance raw;
  raw.demand = demand;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    const FirmSpec &f = firms[i];
    raw.firms.push_back({std::to_string(i + 1), f.a, f.b, f.price_cap, f.gamma});
  }
  return validate_instance(raw);
}

Profile make_profile(const std::vector<Strategy> &strategies) {
  return Profile{strategies};
}

Instance two_firm_example() {
  return make_instance({{1, 1, 10, 0.25}, {2, 1, 10, 0.25}});
}

Instance g1() { return make_instance({{1, 0, 1, 1}, {1, 0, 1, 1}}); }

double Generator::log_uniform(double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng_));
}

double Generator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

std::size_t Generator::pick(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
}

FirmParams Generator::firm() {
  FirmParams f;
  f.a = log_uniform(0.1, 10);
  f.b = pick(0, 3) == 0 ? 0.0 : log_uniform(0.1, 10);
  f.price_cap = log_uniform(0.1, 10);
  f.gamma = log_uniform(0.1, 10);
  return f;
}

Instance Generator::instance(std::size_t n, double demand) {
  std::vector<FirmSpec> specs;
  for (std::size_t i = 0; i < n; ++i) {
    const FirmParams f = firm();
    specs.push_back({f.a, f.b, f.price_cap, f.gamma});
  }
  return make_instance(specs, demand);
}

Profile Generator::profile(const Instance &instance) {
  const std::size_t n = instance.size();
  Profile out;
  for (std::size_t i = 0; i < n; ++i) {
    const FirmParams &f = instance.params(i);
    double z = uniform(0, f.capacity_bound());
    if (pick(0, 4) == 0) z = 0.0;
    out.strategies.push_back({z, uniform(0, f.price_cap)});
  }
  while (out.positive_capacity_count() < 2) {
    const std::size_t i = pick(0, n - 1);
    out[i].z = uniform(0.05, 1.0) * instance.params(i).capacity_bound();
  }
  return out;
}

bool close(double a, double b, double rel, double abs) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

} // namespace capgame::testing
