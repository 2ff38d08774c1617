#include "capgame/best_response.hpp"

#include <algorithm>
#include <cmath>

namespace capgame {

OpponentView::OpponentView(FirmParams own, std::vector<Breakpoint> opponents)
    : own_(own), opponents_(std::move(opponents)) {
  std::stable_sort(opponents_.begin(), opponents_.end(),
                   [](const Breakpoint &l, const Breakpoint &r) {
                     return l.entry_cost < r.entry_cost;
                   });
}

OpponentView OpponentView::of(const Instance &instance, const Profile &profile,
                              std::size_t firm) {
  return OpponentView(instance.params(firm),
                      breakpoints(instance, profile, firm));
}

void OpponentView::require_opposition() const {
  if (opponents_.empty()) {
    throw Error(ErrorCode::EmptyOpposition,
                "no opponent has positive capacity");
  }
}

double OpponentView::xbar(double K) const {
  require_opposition();
  double served = 0.0;
  for (const Breakpoint &bp : opponents_) {
    if (bp.entry_cost >= K) break;
    served += (K - bp.entry_cost) * bp.weight;
  }
  return 1.0 - served;
}

double OpponentView::right_slope_weight(double K) const {
  double w = 0.0;
  for (const Breakpoint &bp : opponents_) {
    if (bp.entry_cost > K) break;
    w += bp.weight;
  }
  return w;
}

double OpponentView::k_max() const {
  require_opposition();
  return solve_fill_level(opponents_, 1.0).level;
}

const char *to_string(NoOptimumReason reason) {
  switch (reason) {
  case NoOptimumReason::EmptyInterval: return "EmptyInterval";
  case NoOptimumReason::NonPositiveFlow: return "NonPositiveFlow";
  case NoOptimumReason::SupNotAttained: return "SupNotAttained";
  }
  return "Unknown";
}

double interior_price_objective(const OpponentView &view, double K) {
  const FirmParams &f = view.own();
  return view.xbar(K) * (K - f.b - 2.0 * f.sqrt_a_gamma());
}

double capped_price_objective(const OpponentView &view, double K) {
  const FirmParams &f = view.own();
  return view.xbar(K) * (f.price_cap - f.a * f.gamma / (K - f.b - f.price_cap));
}

double capped_price_right_derivative(const OpponentView &view, double K) {
  const FirmParams &f = view.own();
  const double ag = f.a * f.gamma;
  const double u = K - f.b - f.price_cap;
  return -view.right_slope_weight(K) * (f.price_cap - ag / u) +
         view.xbar(K) * ag / (u * u);
}

Strategy interior_price_strategy(const OpponentView &view, double K) {
  const FirmParams &f = view.own();
  const double sq = f.sqrt_a_gamma();
  // K <= sqrt(a gamma) + b + C, so the price only exceeds C by rounding.
  return {std::sqrt(f.a / f.gamma) * view.xbar(K),
          std::min(f.price_cap, K - sq - f.b)};
}

Strategy capped_price_strategy(const OpponentView &view, double K) {
  const FirmParams &f = view.own();
  return {f.a * view.xbar(K) / (K - f.b - f.price_cap), f.price_cap};
}

namespace {

// Splits [lo, hi] at every opponent entry cost strictly inside it.
std::vector<double> segment_cuts(const OpponentView &view, double lo,
                                 double hi) {
  std::vector<double> cuts{lo};
  for (const Breakpoint &bp : view.opponents()) {
    if (bp.entry_cost > lo && bp.entry_cost < hi) cuts.push_back(bp.entry_cost);
  }
  cuts.push_back(hi);
  return cuts;
}

// Affine form xbar(K) = intercept - slope * K valid just right of K.
struct AffinePiece {
  double intercept = 1.0;
  double slope = 0.0;
};

AffinePiece piece_right_of(const OpponentView &view, double K) {
  AffinePiece piece;
  for (const Breakpoint &bp : view.opponents()) {
    if (bp.entry_cost > K) break;
    piece.intercept += bp.entry_cost * bp.weight;
    piece.slope += bp.weight;
  }
  return piece;
}

} // namespace

AuxResult solve_interior_price(const OpponentView &view) {
  const FirmParams &f = view.own();
  const double sq = f.sqrt_a_gamma();
  const double lo = 2.0 * sq + f.b;
  const double boundary = sq + f.b + f.price_cap;
  if (lo > boundary) return NoOptimum{NoOptimumReason::EmptyInterval};
  const double kmax = view.k_max();
  if (lo >= kmax) return NoOptimum{NoOptimumReason::NonPositiveFlow};
  const double hi = std::min(boundary, kmax);

  const auto cuts = segment_cuts(view, lo, hi);
  AuxSolution best{lo, interior_price_objective(view, lo),
                   AuxProblem::InteriorPrice};
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double left = cuts[s];
    const double right = cuts[s + 1];
    const AffinePiece piece = piece_right_of(view, left);
    // (intercept - slope K)(K - lo) is a concave quadratic, or increasing
    // and affine when no opponent is active.
    double candidate = right;
    if (piece.slope > 0.0) {
      const double vertex = 0.5 * (piece.intercept / piece.slope + lo);
      candidate = std::clamp(vertex, left, right);
    }
    const double value = interior_price_objective(view, candidate);
    if (value > best.value) best = {candidate, value, AuxProblem::InteriorPrice};
  }
  return best;
}

AuxResult solve_capped_price(const OpponentView &view) {
  const FirmParams &f = view.own();
  const double sq = f.sqrt_a_gamma();
  const double cap = f.price_cap;
  const double ag = f.a * f.gamma;
  // Closed at a gamma / C + b + C when C < sqrt(a gamma), otherwise open at
  // sqrt(a gamma) + b + C.
  const double lower = cap < sq ? ag / cap + f.b + cap : sq + f.b + cap;
  const double kmax = view.k_max();
  if (lower >= kmax) return NoOptimum{NoOptimumReason::NonPositiveFlow};
  if (cap > sq &&
      capped_price_right_derivative(view, lower) <= kCappedSlopeTolerance) {
    return NoOptimum{NoOptimumReason::SupNotAttained};
  }

  const auto cuts = segment_cuts(view, lower, kmax);
  std::optional<AuxSolution> best;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double left = cuts[s];
    const double right = cuts[s + 1];
    const AffinePiece piece = piece_right_of(view, left);
    // Strictly concave on the segment, so the derivative is decreasing.
    auto derivative = [&](double K) {
      const double u = K - f.b - cap;
      return -piece.slope * (cap - ag / u) +
             (piece.intercept - piece.slope * K) * ag / (u * u);
    };
    double candidate;
    if (derivative(left) <= 0.0) {
      candidate = left;
    } else if (derivative(right) >= 0.0) {
      candidate = right;
    } else {
      double lo = left;
      double hi = right;
      for (int iter = 0; iter < 200 && hi - lo > kCappedBisectionTolerance;
           ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (derivative(mid) > 0.0 ? lo : hi) = mid;
      }
      candidate = 0.5 * (lo + hi);
    }
    const double value = capped_price_objective(view, candidate);
    if (!best || value > best->value) {
      best = AuxSolution{candidate, value, AuxProblem::CappedPrice};
    }
  }
  return *best;
}

const char *response_kind(const BestResponseSet &br) {
  if (std::holds_alternative<EmptyResponse>(br)) return "empty";
  if (std::holds_alternative<ZeroCapacitySegment>(br)) return "zero_capacity";
  return "unique";
}

BestResponseSet best_response(const Instance &instance, const Profile &profile,
                              std::size_t firm) {
  validate_profile(instance, profile);
  const NormalizedInstance unit = normalize_demand(instance);
  const OpponentView view = OpponentView::of(unit.instance, profile, firm);
  if (!view.has_opposition()) return EmptyResponse{};

  const double scale = unit.scale.factor;
  // The capped-price branch takes priority whenever its optimum exists.
  const AuxResult capped = solve_capped_price(view);
  if (const auto *sol = std::get_if<AuxSolution>(&capped)) {
    return UniqueResponse{capped_price_strategy(view, sol->K),
                          sol->value * scale, sol->K, AuxProblem::CappedPrice};
  }
  const AuxResult interior = solve_interior_price(view);
  if (const auto *sol = std::get_if<AuxSolution>(&interior);
      sol && sol->value > 0.0) {
    return UniqueResponse{interior_price_strategy(view, sol->K),
                          sol->value * scale, sol->K,
                          AuxProblem::InteriorPrice};
  }
  return ZeroCapacitySegment{instance.params(firm).price_cap};
}

} // namespace capgame
