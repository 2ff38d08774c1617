#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "capgame/model.hpp"
#include "capgame/wardrop.hpp"

namespace capgame {

/// Firm i's view of the market: its own parameters plus the breakpoints of
/// every opponent with positive capacity. Valid only for unit demand.
class OpponentView {
public:
  OpponentView(FirmParams own, std::vector<Breakpoint> opponents);

  /// View of firm i against the other strategies of `profile` on a
  /// unit-demand instance.
  static OpponentView of(const Instance &instance, const Profile &profile,
                         std::size_t firm);

  const FirmParams &own() const { return own_; }
  const std::vector<Breakpoint> &opponents() const { return opponents_; }
  bool has_opposition() const { return !opponents_.empty(); }

  /// Residual flow left for firm i when the routing cost is K:
  /// 1 - sum_{entry < K} (K - entry) * weight. May be negative.
  double xbar(double K) const;
  /// Total opponent weight active just to the right of K (entry <= K).
  double right_slope_weight(double K) const;
  /// Unique root of xbar.
  double k_max() const;

private:
  void require_opposition() const;

  FirmParams own_;
  std::vector<Breakpoint> opponents_;
};

enum class AuxProblem { InteriorPrice, CappedPrice };

struct AuxSolution {
  double K = 0.0;
  double value = 0.0;
  AuxProblem problem = AuxProblem::InteriorPrice;
};

enum class NoOptimumReason {
  EmptyInterval,   // constraint interval on K is empty
  NonPositiveFlow, // residual flow is <= 0 on the whole interval
  SupNotAttained,  // objective strictly decreasing on an open interval
};

const char *to_string(NoOptimumReason reason);

struct NoOptimum {
  NoOptimumReason reason;
};

using AuxResult = std::variant<AuxSolution, NoOptimum>;

/// Right-hand derivative threshold at the open left end of the capped-price
/// problem; at or below it the supremum is treated as not attained.
inline constexpr double kCappedSlopeTolerance = 1e-10;
/// Absolute K tolerance of the capped-price stationary-point bisection.
inline constexpr double kCappedBisectionTolerance = 1e-12;

/// Interior-price problem: maximize xbar(K) * (K - b - 2 sqrt(a gamma)) over
/// 2 sqrt(a gamma) + b <= K <= sqrt(a gamma) + b + C with xbar(K) > 0.
AuxResult solve_interior_price(const OpponentView &view);

/// Capped-price problem: maximize xbar(K) * (C - a gamma / (K - b - C)) over
/// K > sqrt(a gamma) + b + C, K >= a gamma / C + b + C, xbar(K) > 0.
AuxResult solve_capped_price(const OpponentView &view);

/// Objective values of the two problems (no feasibility check).
double interior_price_objective(const OpponentView &view, double K);
double capped_price_objective(const OpponentView &view, double K);
/// One-sided (right) derivative of the capped-price objective.
double capped_price_right_derivative(const OpponentView &view, double K);

/// Strategy realizing routing cost K under each problem.
Strategy interior_price_strategy(const OpponentView &view, double K);
Strategy capped_price_strategy(const OpponentView &view, double K);

struct EmptyResponse {};
struct ZeroCapacitySegment {
  double price_cap = 0.0; // the set {0} x [0, price_cap]
};
struct UniqueResponse {
  Strategy strategy;
  double profit = 0.0;
  double routing_cost = 0.0;
  AuxProblem problem = AuxProblem::InteriorPrice;
};

using BestResponseSet =
    std::variant<EmptyResponse, ZeroCapacitySegment, UniqueResponse>;

const char *response_kind(const BestResponseSet &br);

/// Exact best-response set of one firm to the other strategies in `profile`.
/// Works for any demand; profits are reported in the instance's units.
BestResponseSet best_response(const Instance &instance, const Profile &profile,
                              std::size_t firm);

} // namespace capgame
