#include "capgame/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "capgame/wardrop.hpp"

namespace capgame {

const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
  case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
  case ErrorCode::TooFewFirms: return "TooFewFirms";
  case ErrorCode::DuplicateId: return "DuplicateId";
  case ErrorCode::PriceAboveCap: return "PriceAboveCap";
  case ErrorCode::InvalidStrategy: return "InvalidStrategy";
  case ErrorCode::ProfileMismatch: return "ProfileMismatch";
  case ErrorCode::AllCapacitiesZero: return "AllCapacitiesZero";
  case ErrorCode::FlowOnZeroCapacity: return "FlowOnZeroCapacity";
  case ErrorCode::EmptyOpposition: return "EmptyOpposition";
  case ErrorCode::DomainError: return "DomainError";
  case ErrorCode::BracketFailure: return "BracketFailure";
  case ErrorCode::MOutOfRange: return "MOutOfRange";
  case ErrorCode::TooManyFirms: return "TooManyFirms";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string join_issues(const std::vector<Issue> &issues) {
  std::ostringstream os;
  for (std::size_t k = 0; k < issues.size(); ++k) {
    if (k) os << "; ";
    os << to_string(issues[k].code) << " (" << issues[k].field
       << "): " << issues[k].message;
  }
  return os.str();
}

ErrorCode first_code(const std::vector<Issue> &issues) {
  return issues.empty() ? ErrorCode::ParseError : issues.front().code;
}

void check_param(std::vector<Issue> &issues, const std::string &field,
                 double value, bool allow_zero) {
  if (!std::isfinite(value)) {
    issues.push_back({ErrorCode::NonFiniteParameter, field,
                      "must be a finite number"});
  } else if (allow_zero ? value < 0.0 : value <= 0.0) {
    issues.push_back({ErrorCode::NonPositiveParameter, field,
                      allow_zero ? "must be >= 0" : "must be > 0"});
  }
}

} // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(first_code(issues), join_issues(issues)),
      issues_(std::move(issues)) {}

bool Profile::any_capacity() const {
  return std::any_of(strategies.begin(), strategies.end(),
                     [](const Strategy &s) { return s.z > 0.0; });
}

std::size_t Profile::positive_capacity_count() const {
  return static_cast<std::size_t>(
      std::count_if(strategies.begin(), strategies.end(),
                    [](const Strategy &s) { return s.z > 0.0; }));
}

Instance validate_instance(const RawInstance &raw) {
  std::vector<Issue> issues;
  if (raw.firms.size() < 2) {
    issues.push_back({ErrorCode::TooFewFirms, "firms",
                      "at least 2 firms required, got " +
                          std::to_string(raw.firms.size())});
  }
  check_param(issues, "demand", raw.demand, false);

  std::set<std::string> seen;
  Instance inst;
  inst.demand = raw.demand;
  for (std::size_t k = 0; k < raw.firms.size(); ++k) {
    const RawFirm &f = raw.firms[k];
    const std::string prefix = "firms[" + std::to_string(k) + "].";
    if (!seen.insert(f.id).second) {
      issues.push_back({ErrorCode::DuplicateId, prefix + "id",
                        "duplicate firm id '" + f.id + "'"});
    }
    check_param(issues, prefix + "a", f.a, false);
    check_param(issues, prefix + "b", f.b, true);
    check_param(issues, prefix + "price_cap", f.price_cap, false);
    check_param(issues, prefix + "gamma", f.gamma, false);
    inst.firms.push_back({f.id, {f.a, f.b, f.price_cap, f.gamma}});
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return inst;
}

void validate_profile(const Instance &instance, const Profile &profile) {
  std::vector<Issue> issues;
  if (profile.size() != instance.size()) {
    issues.push_back({ErrorCode::ProfileMismatch, "strategies",
                      "expected " + std::to_string(instance.size()) +
                          " strategies, got " +
                          std::to_string(profile.size())});
    throw ValidationError(std::move(issues));
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Strategy &s = profile[i];
    const std::string prefix = "strategies[" + std::to_string(i) + "].";
    if (!std::isfinite(s.z) || !std::isfinite(s.p)) {
      issues.push_back({ErrorCode::NonFiniteParameter, prefix + "z/p",
                        "must be finite"});
      continue;
    }
    if (s.z < 0.0) {
      issues.push_back({ErrorCode::InvalidStrategy, prefix + "z",
                        "capacity must be >= 0"});
    }
    if (s.p < 0.0) {
      issues.push_back({ErrorCode::InvalidStrategy, prefix + "p",
                        "price must be >= 0"});
    }
    if (s.p > instance.params(i).price_cap) {
      issues.push_back({ErrorCode::PriceAboveCap, prefix + "p",
                        "price exceeds cap of firm '" +
                            instance.firms[i].id + "'"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

NormalizedInstance normalize_demand(const Instance &instance) {
  NormalizedInstance out{instance, DemandScale{instance.demand}};
  const double d = instance.demand;
  if (d == 1.0) return out;
  for (Firm &f : out.instance.firms) {
    f.params.a *= d;
    f.params.gamma /= d;
  }
  out.instance.demand = 1.0;
  return out;
}

std::vector<double> profit(const Instance &instance, const Profile &profile) {
  std::vector<double> result(instance.size(), 0.0);
  if (!profile.any_capacity()) return result;
  const WardropOutcome w = wardrop_flow(instance, profile);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    result[i] = profile[i].p * w.x[i] - instance.params(i).gamma * profile[i].z;
  }
  return result;
}

} // namespace capgame
