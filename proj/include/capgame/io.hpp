#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "capgame/model.hpp"

namespace capgame::io {

using Json = nlohmann::ordered_json;

/// {"demand": d?, "firms": [{"id", "a", "b", "price_cap", "gamma"}, ...]}
Instance instance_from_json(const Json &doc);
/// {"strategies": [{"id", "z", "p"}, ...]}; matched to firms by id.
Profile profile_from_json(const Json &doc, const Instance &instance);

Json to_json(const Instance &instance);
Json to_json(const Profile &profile, const Instance &instance);

Json read_json_file(const std::filesystem::path &path);
Instance load_instance(const std::filesystem::path &path);
Profile load_profile(const std::filesystem::path &path,
                     const Instance &instance);

/// FNV-1a 64 of the canonical instance serialization, as "fnv1a64:<hex>".
std::string instance_digest(const Instance &instance);

} // namespace capgame::io
