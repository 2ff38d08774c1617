#include "capgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capgame/wardrop.hpp"

namespace capgame {

GridResult grid_best_response(const Instance &instance, const Profile &profile,
                              std::size_t firm, std::size_t resolution) {
  validate_profile(instance, profile);
  if (resolution < 2) {
    throw Error(ErrorCode::DomainError, "grid resolution must be >= 2");
  }
  bool opposed = false;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != firm && profile[j].z > 0.0) opposed = true;
  }
  if (!opposed) {
    throw Error(ErrorCode::EmptyOpposition,
                "grid search needs an opponent with positive capacity");
  }

  const FirmParams &f = instance.params(firm);
  const double z_step = f.capacity_bound() / static_cast<double>(resolution - 1);
  const double p_step = f.price_cap / static_cast<double>(resolution - 1);
  GridResult best{{0.0, 0.0}, -std::numeric_limits<double>::infinity(),
                  std::max(z_step, p_step)};
  Profile trial = profile;
  for (std::size_t r = 0; r < resolution; ++r) {
    const double z = r + 1 == resolution ? f.capacity_bound()
                                         : static_cast<double>(r) * z_step;
    for (std::size_t c = 0; c < resolution; ++c) {
      const double p =
          c + 1 == resolution ? f.price_cap : static_cast<double>(c) * p_step;
      trial[firm] = {z, p};
      const WardropOutcome w = wardrop_flow(instance, trial);
      const double value = p * w.x[firm] - f.gamma * z;
      if (value > best.profit) {
        best.profit = value;
        best.strategy = {z, p};
      }
    }
  }
  return best;
}

double WardropCheck::max_residual() const {
  if (zero_capacity_flow) return std::numeric_limits<double>::infinity();
  return std::max({mass_residual, negativity, cost_gap, unused_shortfall,
                   complementarity});
}

WardropCheck check_wardrop(const Instance &instance, const Profile &profile,
                           std::span<const double> x, double K, double tol) {
  WardropCheck out;
  if (x.size() != instance.size() || profile.size() != instance.size()) {
    out.zero_capacity_flow = true;
    return out;
  }
  double mass = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  double highest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    mass += x[i];
    out.negativity = std::max(out.negativity, -x[i]);
    const Strategy &s = profile[i];
    if (s.z <= 0.0) {
      if (x[i] != 0.0) out.zero_capacity_flow = true;
      continue;
    }
    const FirmParams &f = instance.params(i);
    const double cost = f.a * x[i] / s.z + f.b + s.p;
    out.complementarity = std::max(out.complementarity, std::abs(x[i] * (cost - K)));
    if (x[i] > 0.0) {
      out.cost_gap = std::max(out.cost_gap, std::abs(cost - K));
      lowest = std::min(lowest, cost);
      highest = std::max(highest, cost);
    } else {
      out.unused_shortfall = std::max(out.unused_shortfall, K - cost);
    }
  }
  out.mass_residual = std::abs(mass - instance.demand);
  if (highest >= lowest) out.cost_spread = highest - lowest;
  out.passed = out.max_residual() <= tol;
  return out;
}

namespace {

struct Coefficients {
  double sq;       // sqrt(a gamma)
  double boundary; // sqrt(a gamma) + b + C
  double pole;     // where this firm's gamma term diverges
  double scale;    // numerator of the gamma term
  double offset;   // gamma term is scale / (K - offset)
};

Coefficients coefficients(const FirmParams &f, Regime regime) {
  const double sq = std::sqrt(f.a * f.gamma);
  Coefficients c{sq, sq + f.b + f.price_cap, 0.0, 0.0, 0.0};
  if (regime == Regime::InteriorPrice) {
    c.scale = sq;
    c.offset = sq + f.b;
  } else {
    c.scale = f.a * f.gamma / f.price_cap;
    c.offset = f.b + f.price_cap;
  }
  c.pole = c.offset;
  return c;
}

CandidateSolution solve_candidate(const Instance &game, double demand,
                                  const std::vector<Regime> &regimes) {
  const std::size_t n = game.size();
  std::vector<Coefficients> coef(n);
  double pole = -std::numeric_limits<double>::infinity();
  double active = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (regimes[i] == Regime::Inactive) continue;
    coef[i] = coefficients(game.params(i), regimes[i]);
    pole = std::max(pole, coef[i].pole);
    active += 1.0;
  }
  const double target = active - 1.0;
  // Sum of gamma terms is strictly decreasing from +inf at the largest pole.
  auto gamma_sum = [&](double K) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (regimes[i] != Regime::Inactive) {
        total += coef[i].scale / (K - coef[i].offset);
      }
    }
    return total;
  };
  double lo = pole + 1e-12;
  double step = std::max(1.0, std::abs(pole));
  double hi = pole + step;
  for (int k = 0; gamma_sum(hi) >= target; ++k) {
    if (k > 200) throw Error(ErrorCode::BracketFailure, "candidate bracket");
    step *= 2.0;
    hi = pole + step;
  }
  for (int k = 0; k < 400; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gamma_sum(mid) > target ? lo : hi) = mid;
  }
  const double K = 0.5 * (lo + hi);

  CandidateSolution cand;
  cand.regimes = regimes;
  cand.K = K;
  cand.profile.strategies.resize(n);
  cand.flows.assign(n, 0.0);

  std::vector<double> share(n, 0.0);
  double share_sum = 0.0;
  bool ranges = true;
  bool inactive_ok = true;
  bool positive = true;
  for (std::size_t i = 0; i < n; ++i) {
    const FirmParams &f = game.params(i);
    const double sq = std::sqrt(f.a * f.gamma);
    const double boundary = sq + f.b + f.price_cap;
    const double capped_entry = f.a * f.gamma / f.price_cap + f.b + f.price_cap;
    switch (regimes[i]) {
    case Regime::Inactive: {
      const double threshold = sq > f.price_cap ? capped_entry : 2.0 * sq + f.b;
      inactive_ok = inactive_ok && K <= threshold;
      continue;
    }
    case Regime::InteriorPrice:
      ranges = ranges && 2.0 * sq + f.b <= K && K <= boundary;
      share[i] = (1.0 - coef[i].scale / (K - coef[i].offset)) * sq;
      break;
    case Regime::CappedPrice:
      ranges = ranges && K > boundary && K >= capped_entry;
      share[i] = (1.0 - coef[i].scale / (K - coef[i].offset)) *
                 (K - f.b - f.price_cap);
      break;
    }
    positive = positive && share[i] > 0.0;
    share_sum += share[i];
  }

  for (std::size_t i = 0; i < n; ++i) {
    const FirmParams &f = game.params(i);
    Strategy &s = cand.profile[i];
    if (regimes[i] == Regime::Inactive) {
      s = {0.0, f.price_cap};
      continue;
    }
    const double x = share[i] / share_sum;
    if (regimes[i] == Regime::InteriorPrice) {
      s = {std::sqrt(f.a / f.gamma) * x, K - std::sqrt(f.a * f.gamma) - f.b};
    } else {
      s = {f.a * x / (K - f.b - f.price_cap), f.price_cap};
    }
    cand.flows[i] = x * demand;
  }
  cand.flags = {ranges, inactive_ok, positive};
  return cand;
}

} // namespace

std::vector<CandidateSolution> enumerate_candidates(const Instance &instance) {
  const std::size_t n = instance.size();
  if (n > kMaxEnumeratedFirms) {
    throw Error(ErrorCode::TooManyFirms,
                "enumeration supports at most 12 firms");
  }
  const NormalizedInstance unit = normalize_demand(instance);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  std::vector<CandidateSolution> out;
  std::vector<Regime> regimes(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    std::size_t active = 0;
    for (std::size_t i = 0; i < n; ++i) {
      regimes[i] = static_cast<Regime>(rest % 3);
      rest /= 3;
      if (regimes[i] != Regime::Inactive) ++active;
    }
    if (active < 2) continue;
    out.push_back(solve_candidate(unit.instance, unit.scale.factor, regimes));
  }
  return out;
}

} // namespace capgame
