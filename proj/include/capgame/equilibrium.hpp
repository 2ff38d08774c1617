#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "capgame/model.hpp"

namespace capgame {

/// Routing-cost levels that govern a firm's equilibrium behaviour.
struct ActivationThreshold {
  /// The firm installs capacity in equilibrium iff K exceeds this.
  double activation = 0.0;
  /// sqrt(a gamma) + b + C: above it the firm prices at the cap.
  double branch_boundary = 0.0;
};

double activation_threshold(const FirmParams &firm);
double branch_boundary(const FirmParams &firm);
ActivationThreshold thresholds(const FirmParams &firm);

/// sqrt(a gamma) / (K - sqrt(a gamma) - b); domain K > sqrt(a gamma) + b.
double gamma_interior(const FirmParams &firm, double K);
/// (a gamma / C) / (K - b - C); domain K > b + C.
double gamma_capped(const FirmParams &firm, double K);
/// Interior branch up to the branch boundary, capped branch above it.
double gamma_unified(const FirmParams &firm, double K);

/// sum over firms with K > activation of (1 - gamma_unified(K)). Continuous,
/// nondecreasing, strictly increasing past the smallest activation threshold;
/// the equilibrium routing cost is its unique root of phi(K) = 1.
double phi(const Instance &instance, double K);

enum class Regime { Inactive, InteriorPrice, CappedPrice };

const char *to_string(Regime regime);

struct FirmOutcome {
  Strategy strategy;
  double flow = 0.0;
  double profit = 0.0;
  Regime regime = Regime::Inactive;
  /// False for inactive firms: any price in [0, C] is an equilibrium price.
  bool price_unique = true;
  /// K lies within 1e-10 of the branch boundary; both price regimes agree.
  bool at_branch_boundary = false;
};

struct Equilibrium {
  double K = 0.0;
  /// sum over active firms of z_j / a_j (instance units).
  double B = 0.0;
  std::vector<FirmOutcome> firms;

  Profile profile() const;
  std::vector<std::size_t> active() const;
  std::vector<std::size_t> interior_price() const;
  std::vector<std::size_t> capped_price() const;
};

struct SolveOptions {
  double relative_tolerance = 1e-13;
};

Equilibrium solve_equilibrium(const Instance &instance,
                              const SolveOptions &options = {});

struct CertificationCheck {
  std::string name;
  std::optional<std::size_t> firm;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;
};

struct CertificationReport {
  bool precondition_met = true;
  double K = 0.0;
  std::vector<CertificationCheck> checks;

  bool passed() const;
  double max_residual(const std::string &name) const;
};

struct CertifyOptions {
  double wardrop_tolerance = 1e-9;
  double profit_tolerance = 1e-8;
  double strategy_tolerance = 1e-7;
  double identity_tolerance = 1e-8;
  double gamma_sum_tolerance = 1e-9;
  double threshold_tolerance = 1e-9;
};

/// Certifies a profile as a pure Nash equilibrium; failures are reported as
/// check entries, never thrown.
CertificationReport verify_equilibrium(const Instance &instance,
                                       const Profile &profile,
                                       const CertifyOptions &options = {});

} // namespace capgame
