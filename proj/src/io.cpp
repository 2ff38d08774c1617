#include "capgame/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>

namespace capgame::io {

namespace {

[[noreturn]] void parse_failure(const std::string &field,
                                const std::string &message) {
  throw ValidationError({{ErrorCode::ParseError, field, message}});
}

double number_field(const Json &obj, const char *key, const std::string &where,
                    std::optional<double> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    parse_failure(where + key, "missing required field");
  }
  if (!it->is_number()) parse_failure(where + key, "must be a number");
  return it->get<double>();
}

std::string id_field(const Json &obj, const std::string &where) {
  const auto it = obj.find("id");
  if (it == obj.end()) parse_failure(where + "id", "missing required field");
  if (!it->is_string()) parse_failure(where + "id", "must be a string");
  return it->get<std::string>();
}

const Json &array_field(const Json &doc, const char *key) {
  if (!doc.is_object()) parse_failure("", "document must be a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) parse_failure(key, "missing required field");
  if (!it->is_array()) parse_failure(key, "must be an array");
  return *it;
}

} // namespace

Instance instance_from_json(const Json &doc) {
  const Json &firms = array_field(doc, "firms");
  RawInstance raw;
  raw.demand = number_field(doc, "demand", "", 1.0);
  for (std::size_t k = 0; k < firms.size(); ++k) {
    const Json &f = firms[k];
    const std::string where = "firms[" + std::to_string(k) + "].";
    if (!f.is_object()) parse_failure(where, "firm must be an object");
    raw.firms.push_back({id_field(f, where), number_field(f, "a", where),
                         number_field(f, "b", where),
                         number_field(f, "price_cap", where),
                         number_field(f, "gamma", where)});
  }
  return validate_instance(raw);
}

Profile profile_from_json(const Json &doc, const Instance &instance) {
  const Json &entries = array_field(doc, "strategies");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    index[instance.firms[i].id] = i;
  }
  std::vector<Issue> issues;
  std::vector<bool> seen(instance.size(), false);
  Profile profile;
  profile.strategies.assign(instance.size(), Strategy{});
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Json &e = entries[k];
    const std::string where = "strategies[" + std::to_string(k) + "].";
    if (!e.is_object()) parse_failure(where, "strategy must be an object");
    const std::string id = id_field(e, where);
    const auto it = index.find(id);
    if (it == index.end()) {
      issues.push_back({ErrorCode::ProfileMismatch, where + "id",
                        "unknown firm id '" + id + "'"});
      continue;
    }
    if (seen[it->second]) {
      issues.push_back({ErrorCode::DuplicateId, where + "id",
                        "duplicate strategy for firm '" + id + "'"});
      continue;
    }
    seen[it->second] = true;
    profile[it->second] = {number_field(e, "z", where),
                           number_field(e, "p", where)};
  }
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (!seen[i]) {
      issues.push_back({ErrorCode::ProfileMismatch, "strategies",
                        "missing strategy for firm '" + instance.firms[i].id +
                            "'"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  validate_profile(instance, profile);
  return profile;
}

Json to_json(const Instance &instance) {
  Json firms = Json::array();
  for (const Firm &f : instance.firms) {
    firms.push_back({{"id", f.id},
                     {"a", f.params.a},
                     {"b", f.params.b},
                     {"price_cap", f.params.price_cap},
                     {"gamma", f.params.gamma}});
  }
  return {{"demand", instance.demand}, {"firms", std::move(firms)}};
}

Json to_json(const Profile &profile, const Instance &instance) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    entries.push_back({{"id", instance.firms[i].id},
                       {"z", profile[i].z},
                       {"p", profile[i].p}});
  }
  return {{"strategies", std::move(entries)}};
}

Json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) parse_failure(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    parse_failure(path.string(), e.what());
  }
}

Instance load_instance(const std::filesystem::path &path) {
  return instance_from_json(read_json_file(path));
}

Profile load_profile(const std::filesystem::path &path,
                     const Instance &instance) {
  return profile_from_json(read_json_file(path), instance);
}

std::string instance_digest(const Instance &instance) {
  const std::string canonical = to_json(instance).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + buf;
}

} // namespace capgame::io
