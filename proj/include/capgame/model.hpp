#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capgame {

enum class ErrorCode {
  NonPositiveParameter,
  NonFiniteParameter,
  TooFewFirms,
  DuplicateId,
  PriceAboveCap,
  InvalidStrategy,
  ProfileMismatch,
  AllCapacitiesZero,
  FlowOnZeroCapacity,
  EmptyOpposition,
  DomainError,
  BracketFailure,
  MOutOfRange,
  TooManyFirms,
  ParseError,
};

const char *to_string(ErrorCode code);

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct Issue {
  ErrorCode code;
  std::string field;
  std::string message;
};

/// Raised by validation; carries every violated constraint, not just the
/// first one.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Issue> issues);
  const std::vector<Issue> &issues() const noexcept { return issues_; }

private:
  std::vector<Issue> issues_;
};

/// Constants of one firm: latency a*x/z + b, price cap C, capacity cost gamma.
struct FirmParams {
  double a = 1.0;
  double b = 0.0;
  double price_cap = 1.0;
  double gamma = 1.0;

  double sqrt_a_gamma() const { return std::sqrt(a * gamma); }
  /// Capacity above which any strategy earns negative profit.
  double capacity_bound() const { return price_cap / gamma; }
};

struct Firm {
  std::string id;
  FirmParams params;
};

struct Instance {
  std::vector<Firm> firms;
  double demand = 1.0;

  std::size_t size() const { return firms.size(); }
  const FirmParams &params(std::size_t i) const { return firms[i].params; }
};

struct Strategy {
  double z = 0.0; // capacity
  double p = 0.0; // price
};

struct Profile {
  std::vector<Strategy> strategies;

  std::size_t size() const { return strategies.size(); }
  const Strategy &operator[](std::size_t i) const { return strategies[i]; }
  Strategy &operator[](std::size_t i) { return strategies[i]; }
  bool any_capacity() const;
  std::size_t positive_capacity_count() const;
};

struct WardropOutcome {
  std::vector<double> x; // flow per firm
  double K = 0.0;        // routing cost shared by all used firms
};

/// Unvalidated instance data as read from a file.
struct RawFirm {
  std::string id;
  double a = 0.0;
  double b = 0.0;
  double price_cap = 0.0;
  double gamma = 0.0;
};

struct RawInstance {
  std::vector<RawFirm> firms;
  double demand = 1.0;
};

Instance validate_instance(const RawInstance &raw);

/// Checks length, nonnegativity and price caps. Prices above the cap are
/// rejected, never clamped.
void validate_profile(const Instance &instance, const Profile &profile);

/// Flows, profits and social cost of the original game are `factor` times
/// those of the unit-demand game; capacities, prices and routing costs are
/// unchanged.
struct DemandScale {
  double factor = 1.0;
};

struct NormalizedInstance {
  Instance instance;
  DemandScale scale;
};

/// Maps demand d to 1 via a -> a*d and gamma -> gamma/d.
NormalizedInstance normalize_demand(const Instance &instance);

/// Pi_i = p_i x_i - gamma_i z_i, or all zeros when no capacity is installed.
std::vector<double> profit(const Instance &instance, const Profile &profile);

} // namespace capgame
