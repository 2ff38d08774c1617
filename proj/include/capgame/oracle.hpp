#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "capgame/equilibrium.hpp"
#include "capgame/model.hpp"

// Brute-force verifiers. Nothing here calls into the analytic best-response
// or equilibrium solvers, so they can certify those results independently.
namespace capgame {

struct GridResult {
  Strategy strategy;
  double profit = 0.0;
  double spacing = 0.0; // larger of the two grid steps
};

/// Exhaustive search of [0, C/gamma] x [0, C] with `resolution` points per
/// axis, every point priced through the Wardrop flow.
GridResult grid_best_response(const Instance &instance, const Profile &profile,
                              std::size_t firm, std::size_t resolution);

struct WardropCheck {
  bool passed = false;
  double mass_residual = 0.0;    // |sum x - demand|
  double negativity = 0.0;       // largest -x_i
  double cost_gap = 0.0;         // largest |c_i - K| over used firms
  double cost_spread = 0.0;      // max - min cost over used firms
  double unused_shortfall = 0.0; // largest K - c_i over unused firms
  double complementarity = 0.0;  // largest |x_i (c_i - K)|
  bool zero_capacity_flow = false;

  double max_residual() const;
};

WardropCheck check_wardrop(const Instance &instance, const Profile &profile,
                           std::span<const double> x, double K, double tol);

struct CandidateFlags {
  bool regime_ranges = false;   // K range of every active firm's regime
  bool inactive_ranges = false; // K <= activation for every excluded firm
  bool positive_flows = false;

  bool consistent() const {
    return regime_ranges && inactive_ranges && positive_flows;
  }
};

/// Equilibrium candidate for one active set and one interior/capped split.
struct CandidateSolution {
  std::vector<Regime> regimes;
  double K = 0.0;
  Profile profile;
  std::vector<double> flows;
  CandidateFlags flags;

  bool consistent() const { return flags.consistent(); }
};

inline constexpr std::size_t kMaxEnumeratedFirms = 12;

/// Every active set of size >= 2 and every interior/capped split of it,
/// each solved for K and reconstructed. Throws TooManyFirms above 12 firms.
/// Works on unit demand; flows are rescaled to the instance's demand.
std::vector<CandidateSolution> enumerate_candidates(const Instance &instance);

} // namespace capgame
