#include "capgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capgame/best_response.hpp"
#include "capgame/oracle.hpp"
#include "capgame/wardrop.hpp"

namespace capgame {

double activation_threshold(const FirmParams &firm) {
  const double sq = firm.sqrt_a_gamma();
  if (sq > firm.price_cap) {
    return firm.a * firm.gamma / firm.price_cap + firm.b + firm.price_cap;
  }
  return 2.0 * sq + firm.b;
}

double branch_boundary(const FirmParams &firm) {
  return firm.sqrt_a_gamma() + firm.b + firm.price_cap;
}

ActivationThreshold thresholds(const FirmParams &firm) {
  return {activation_threshold(firm), branch_boundary(firm)};
}

double gamma_interior(const FirmParams &firm, double K) {
  const double sq = firm.sqrt_a_gamma();
  const double denom = K - sq - firm.b;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "interior gamma requires K > sqrt(a gamma) + b");
  }
  return sq / denom;
}

double gamma_capped(const FirmParams &firm, double K) {
  const double denom = K - firm.b - firm.price_cap;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DomainError, "capped gamma requires K > b + C");
  }
  return firm.a * firm.gamma / firm.price_cap / denom;
}

double gamma_unified(const FirmParams &firm, double K) {
  return K <= branch_boundary(firm) ? gamma_interior(firm, K)
                                    : gamma_capped(firm, K);
}

double phi(const Instance &instance, double K) {
  double total = 0.0;
  for (const Firm &f : instance.firms) {
    if (K > activation_threshold(f.params)) {
      total += 1.0 - gamma_unified(f.params, K);
    }
  }
  return total;
}

const char *to_string(Regime regime) {
  switch (regime) {
  case Regime::Inactive: return "inactive";
  case Regime::InteriorPrice: return "interior_price";
  case Regime::CappedPrice: return "capped_price";
  }
  return "unknown";
}

Profile Equilibrium::profile() const {
  Profile out;
  out.strategies.reserve(firms.size());
  for (const FirmOutcome &f : firms) out.strategies.push_back(f.strategy);
  return out;
}

namespace {

std::vector<std::size_t> firms_in(const std::vector<FirmOutcome> &firms,
                                  auto &&pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    if (pred(firms[i].regime)) out.push_back(i);
  }
  return out;
}

} // namespace

std::vector<std::size_t> Equilibrium::active() const {
  return firms_in(firms, [](Regime r) { return r != Regime::Inactive; });
}

std::vector<std::size_t> Equilibrium::interior_price() const {
  return firms_in(firms, [](Regime r) { return r == Regime::InteriorPrice; });
}

std::vector<std::size_t> Equilibrium::capped_price() const {
  return firms_in(firms, [](Regime r) { return r == Regime::CappedPrice; });
}

Equilibrium solve_equilibrium(const Instance &instance,
                              const SolveOptions &options) {
  const NormalizedInstance unit = normalize_demand(instance);
  const Instance &game = unit.instance;

  double lo = std::numeric_limits<double>::infinity();
  for (const Firm &f : game.firms) {
    lo = std::min(lo, activation_threshold(f.params));
  }
  double step = std::max(1.0, std::abs(lo));
  double hi = lo + step;
  for (int k = 0; phi(game, hi) <= 1.0; ++k) {
    if (k > 200) {
      throw Error(ErrorCode::BracketFailure,
                  "could not bracket the equilibrium routing cost");
    }
    step *= 2.0;
    hi = lo + step;
  }
  for (int k = 0; k < 400 && hi - lo > options.relative_tolerance * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(game, mid) < 1.0 ? lo : hi) = mid;
  }
  const double K = 0.5 * (lo + hi);

  Equilibrium eq;
  eq.K = K;
  eq.firms.resize(game.size());
  // Flow shares x_i / B for active firms; B is fixed by total flow 1.
  std::vector<double> share(game.size(), 0.0);
  double share_sum = 0.0;
  for (std::size_t i = 0; i < game.size(); ++i) {
    const FirmParams &f = game.params(i);
    FirmOutcome &out = eq.firms[i];
    if (!(K > activation_threshold(f))) {
      out.regime = Regime::Inactive;
      out.strategy = {0.0, instance.params(i).price_cap};
      out.price_unique = false;
      continue;
    }
    const double boundary = branch_boundary(f);
    out.at_branch_boundary = std::abs(K - boundary) < 1e-10;
    if (K <= boundary) {
      out.regime = Regime::InteriorPrice;
      share[i] = (1.0 - gamma_interior(f, K)) * f.sqrt_a_gamma();
    } else {
      out.regime = Regime::CappedPrice;
      share[i] = (1.0 - gamma_capped(f, K)) * (K - f.b - f.price_cap);
    }
    share_sum += share[i];
  }

  const double unit_B = 1.0 / share_sum;
  const double d = unit.scale.factor;
  for (std::size_t i = 0; i < game.size(); ++i) {
    FirmOutcome &out = eq.firms[i];
    if (out.regime == Regime::Inactive) continue;
    const FirmParams &f = game.params(i);
    const double x = share[i] * unit_B;
    if (out.regime == Regime::InteriorPrice) {
      out.strategy = {std::sqrt(f.a / f.gamma) * x,
                      std::min(f.price_cap, K - f.sqrt_a_gamma() - f.b)};
    } else {
      out.strategy = {f.a * x / (K - f.b - f.price_cap), f.price_cap};
    }
    out.flow = x * d;
    out.profit = out.strategy.p * out.flow -
                 instance.params(i).gamma * out.strategy.z;
    eq.B += out.strategy.z / instance.params(i).a;
  }
  return eq;
}

bool CertificationReport::passed() const {
  return precondition_met &&
         std::all_of(checks.begin(), checks.end(),
                     [](const CertificationCheck &c) { return c.passed; });
}

double CertificationReport::max_residual(const std::string &name) const {
  double worst = 0.0;
  for (const CertificationCheck &c : checks) {
    if (c.name == name) worst = std::max(worst, c.residual);
  }
  return worst;
}

namespace {

void add_check(CertificationReport &report, std::string name,
               std::optional<std::size_t> firm, double residual,
               double tolerance, std::string detail = {}) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  report.checks.push_back(
      {std::move(name), firm, residual, tolerance, ok, std::move(detail)});
}

void add_flag(CertificationReport &report, std::string name,
              std::optional<std::size_t> firm, bool ok, std::string detail) {
  report.checks.push_back(
      {std::move(name), firm, ok ? 0.0 : 1.0, 0.0, ok, std::move(detail)});
}

} // namespace

CertificationReport verify_equilibrium(const Instance &instance,
                                       const Profile &profile,
                                       const CertifyOptions &options) {
  CertificationReport report;
  try {
    validate_profile(instance, profile);
  } catch (const ValidationError &e) {
    report.precondition_met = false;
    add_flag(report, "precondition", std::nullopt, false, e.what());
    return report;
  }
  if (profile.positive_capacity_count() < 2) {
    report.precondition_met = false;
    add_flag(report, "precondition", std::nullopt, false,
             "an equilibrium needs at least two firms with positive capacity");
    return report;
  }

  const NormalizedInstance unit = normalize_demand(instance);
  const Instance &game = unit.instance;
  const WardropOutcome flow = wardrop_flow(game, profile);
  const double K = flow.K;
  report.K = K;

  // (a) customers are at a Wardrop equilibrium and every firm with capacity
  // is used.
  const WardropCheck wc =
      check_wardrop(game, profile, flow.x, K, options.wardrop_tolerance);
  add_check(report, "wardrop", std::nullopt, wc.max_residual(),
            options.wardrop_tolerance);

  std::vector<std::size_t> active;
  double B = 0.0;
  for (std::size_t i = 0; i < game.size(); ++i) {
    if (profile[i].z > 0.0) {
      active.push_back(i);
      B += profile[i].z / game.params(i).a;
    }
  }
  const std::vector<double> profits = profit(game, profile);

  for (std::size_t i = 0; i < game.size(); ++i) {
    const FirmParams &f = game.params(i);
    const Strategy &s = profile[i];
    const double threshold = activation_threshold(f);
    const double slack = options.threshold_tolerance * std::max(1.0, K);
    const BestResponseSet br = best_response(game, profile, i);
    if (s.z > 0.0) {
      add_flag(report, "active_flow", i, flow.x[i] > 0.0,
               "firm with capacity must carry flow");
      add_flag(report, "activation", i, K > threshold - slack,
               "active firm needs K > activation threshold");
      const auto *unique = std::get_if<UniqueResponse>(&br);
      if (!unique) {
        add_flag(report, "best_response_profit", i, false,
                 std::string("best response is ") + response_kind(br));
        continue;
      }
      add_check(report, "best_response_profit", i,
                std::max(0.0, unique->profit - profits[i]),
                options.profit_tolerance);
      add_check(report, "best_response_strategy", i,
                std::max(std::abs(unique->strategy.z - s.z),
                         std::abs(unique->strategy.p - s.p)),
                options.strategy_tolerance);
    } else {
      add_flag(report, "activation", i, K <= threshold + slack,
               "inactive firm needs K <= activation threshold");
      // Both auxiliary problems must be infeasible, i.e. the best-response
      // set is the zero-capacity segment.
      const bool ok = std::holds_alternative<ZeroCapacitySegment>(br);
      const auto *unique = std::get_if<UniqueResponse>(&br);
      report.checks.push_back(
          {"inactive_best_response", i, unique ? unique->profit : 0.0, 0.0, ok,
           std::string("best response is ") + response_kind(br)});
    }
  }

  // (d) first-order identities and (e) the gamma-sum equation.
  double gamma_sum = 0.0;
  bool gamma_ok = true;
  for (std::size_t i : active) {
    const FirmParams &f = game.params(i);
    const Strategy &s = profile[i];
    const double x = flow.x[i];
    const double others = B - s.z / f.a;
    double r_capacity = std::numeric_limits<double>::infinity();
    double r_price = std::numeric_limits<double>::infinity();
    if (s.p < f.price_cap) {
      r_capacity = std::abs(s.z - std::sqrt(f.a / f.gamma) * x);
      r_price = std::abs(s.p - (x / others + f.sqrt_a_gamma()));
    } else if (x > 0.0 && K - f.b - f.price_cap > 0.0) {
      r_capacity = std::abs(s.z - f.a * x / (K - f.b - f.price_cap));
      r_price = std::abs(f.price_cap / (1.0 + f.a / s.z * others) -
                         f.gamma * s.z * s.z / (f.a * x * others));
    }
    add_check(report, "identity_capacity", i, r_capacity,
              options.identity_tolerance);
    add_check(report, "identity_price", i, r_price, options.identity_tolerance);
    try {
      gamma_sum += s.p < f.price_cap ? gamma_interior(f, K) : gamma_capped(f, K);
    } catch (const Error &) {
      gamma_ok = false;
    }
  }
  const double target = static_cast<double>(active.size()) - 1.0;
  add_check(report, "gamma_sum", std::nullopt,
            gamma_ok ? std::abs(gamma_sum - target)
                     : std::numeric_limits<double>::infinity(),
            options.gamma_sum_tolerance);
  return report;
}

} // namespace capgame
