#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "capgame/model.hpp"

namespace capgame {

/// A served firm seen from the customers' side: it starts receiving flow once
/// the routing cost exceeds `entry_cost` = b + p, and absorbs `weight` = z/a
/// units of flow per unit of additional routing cost.
struct Breakpoint {
  std::size_t firm = 0;
  double entry_cost = 0.0;
  double weight = 0.0;
};

/// Breakpoints of every firm with z > 0 (optionally skipping one firm), sorted
/// ascending by entry cost; ties keep firm order.
std::vector<Breakpoint> breakpoints(const Instance &instance,
                                    const Profile &profile,
                                    std::optional<std::size_t> skip = {});

/// Root of the fill function K -> sum_{entry < K} (K - entry) * weight = mass
/// for sorted breakpoints. The fill function is piecewise linear, so the
/// root is obtained exactly on the segment where it crosses `mass`.
struct FillLevel {
  double level = 0.0;
  std::size_t active = 0; // leading breakpoints with entry_cost < level
};

FillLevel solve_fill_level(std::span<const Breakpoint> sorted, double mass);

/// Unique Wardrop flow for the instance's demand. Throws AllCapacitiesZero.
WardropOutcome wardrop_flow(const Instance &instance, const Profile &profile);

double routing_cost(const Instance &instance, const Profile &profile);

/// a x / z + b + p, or +inf for a firm without capacity.
double effective_cost(const FirmParams &firm, const Strategy &s, double x);

/// Objective of the convex program whose minimizer is the Wardrop flow:
/// sum over served firms of (a/(2z)) x^2 + (b + p) x.
double beckmann_potential(const Instance &instance, const Profile &profile,
                          std::span<const double> x);

} // namespace capgame
