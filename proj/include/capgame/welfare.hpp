#pragma once

#include <span>
#include <vector>

#include "capgame/equilibrium.hpp"
#include "capgame/model.hpp"

namespace capgame {

/// Congestion cost borne by customers plus installation cost; prices are
/// transfers and cancel. +inf when no capacity is installed.
double social_cost(const Instance &instance, const Profile &profile);

struct SocialOptimum {
  double value = 0.0;
  std::size_t firm = 0; // the single firm serving all demand
  Profile witness;
};

/// With the flow fixed, each firm's cost a x^2/z + gamma z is minimized at
/// z = x sqrt(a/gamma), leaving a cost linear in x with unit cost
/// 2 sqrt(a gamma) + b. The optimum therefore routes all demand through the
/// firm with the smallest unit cost.
SocialOptimum social_optimum(const Instance &instance);

struct WelfareReport {
  Equilibrium equilibrium;
  double equilibrium_cost = 0.0;
  SocialOptimum optimum;
  double ratio = 0.0;
};

WelfareReport poa(const Instance &instance);

/// Two firms: a = gamma = C = 1, b = 0 and a = gamma = C = M, b = 0.
Instance gm_instance(double M);

/// Closed-form equilibrium routing cost of the two-firm family above:
/// the larger root of K^2 - 2(M+1)K + 3M = 0.
double gm_equilibrium_cost(double M);

struct SweepRow {
  double M = 0.0;
  double K = 0.0;
  double social_cost_pne = 0.0;
  double opt = 0.0;
  double poa = 0.0;
};

/// Evaluates the family for every M; rows come back in input order.
std::vector<SweepRow> sweep_gm(std::span<const double> m_values);

} // namespace capgame
