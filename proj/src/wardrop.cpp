#include "capgame/wardrop.hpp"

#include <algorithm>

namespace capgame {

std::vector<Breakpoint> breakpoints(const Instance &instance,
                                    const Profile &profile,
                                    std::optional<std::size_t> skip) {
  std::vector<Breakpoint> out;
  out.reserve(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (skip && *skip == j) continue;
    const Strategy &s = profile[j];
    if (s.z <= 0.0) continue;
    const FirmParams &f = instance.params(j);
    out.push_back({j, f.b + s.p, s.z / f.a});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Breakpoint &l, const Breakpoint &r) {
                     return l.entry_cost < r.entry_cost;
                   });
  return out;
}

FillLevel solve_fill_level(std::span<const Breakpoint> sorted, double mass) {
  if (sorted.empty()) {
    throw Error(ErrorCode::AllCapacitiesZero,
                "fill level undefined without any served firm");
  }
  double weight = 0.0;
  double weighted_entry = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    weight += sorted[k].weight;
    weighted_entry += sorted[k].weight * sorted[k].entry_cost;
    // On this segment the fill function is weight * K - weighted_entry.
    const double level = (mass + weighted_entry) / weight;
    if (k + 1 == sorted.size() || level <= sorted[k + 1].entry_cost) {
      return {level, k + 1};
    }
  }
  return {}; // unreachable
}

WardropOutcome wardrop_flow(const Instance &instance, const Profile &profile) {
  validate_profile(instance, profile);
  const auto sorted = breakpoints(instance, profile);
  if (sorted.empty()) {
    throw Error(ErrorCode::AllCapacitiesZero,
                "Wardrop flow undefined: all capacities are zero");
  }
  const FillLevel fill = solve_fill_level(sorted, instance.demand);
  WardropOutcome out;
  out.K = fill.level;
  out.x.assign(instance.size(), 0.0);
  for (std::size_t k = 0; k < fill.active; ++k) {
    const Breakpoint &bp = sorted[k];
    out.x[bp.firm] = (fill.level - bp.entry_cost) * bp.weight;
  }
  return out;
}

double routing_cost(const Instance &instance, const Profile &profile) {
  return wardrop_flow(instance, profile).K;
}

double effective_cost(const FirmParams &firm, const Strategy &s, double x) {
  if (s.z <= 0.0) return std::numeric_limits<double>::infinity();
  return firm.a * x / s.z + firm.b + s.p;
}

double beckmann_potential(const Instance &instance, const Profile &profile,
                          std::span<const double> x) {
  if (x.size() != instance.size()) {
    throw Error(ErrorCode::ProfileMismatch, "flow vector length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Strategy &s = profile[i];
    if (s.z <= 0.0) {
      if (x[i] != 0.0) {
        throw Error(ErrorCode::FlowOnZeroCapacity,
                    "flow assigned to firm '" + instance.firms[i].id +
                        "' without capacity");
      }
      continue;
    }
    const FirmParams &f = instance.params(i);
    total += f.a / (2.0 * s.z) * x[i] * x[i] + (f.b + s.p) * x[i];
  }
  return total;
}

} // namespace capgame
