/**
 * @file io.hpp
 * @brief Mission config files, JSON records and run manifests.
 *
 * Config files are plain text, one `key = value` per line, `#` starts a
 * comment. Keys mirror MissionConfig (see config_keys()). `obstacle = x y`
 * and `trail = x1 y1 x2 y2 ...` may repeat. Numbers are written in shortest
 * round-trip form and parsed independently of the C locale.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wisar/harness.hpp"

namespace wisar {

using Json = nlohmann::ordered_json;

/// Every accepted key, in file order.
std::vector<std::string> config_keys();

/// Sets one key. Throws ConfigError on unknown keys or malformed values.
void apply_setting(MissionConfig& config, const std::string& key, const std::string& value);

/// Applies every setting in a config file on top of `config`.
void read_config(std::istream& is, MissionConfig& config);

/// Full snapshot as ordered (key, value) pairs; repeated keys for obstacles and trails.
std::vector<std::pair<std::string, std::string>> config_entries(const MissionConfig& config);

void write_config(std::ostream& os, const MissionConfig& config);

Json to_json(const Vec2& p);
Json to_json(const TrialResult& result);
TrialResult trial_from_json(const Json& j);
Json to_json(const TrialMetrics& m);
Json to_json(const BenchmarkReport& report);

/// Run description written next to every output.
struct RunManifest {
    std::string command;
    Json options = Json::object();
    MissionConfig config;
    std::vector<std::string> outputs;
    std::string created_at;  ///< UTC, ISO 8601
};

Json to_json(const RunManifest& m);

/// Reads the config snapshot and options back from a manifest.
RunManifest manifest_from_json(const Json& j);

/// Current UTC time, or SOURCE_DATE_EPOCH when set.
std::string utc_timestamp();

/// Version tag compiled into the library.
std::string version_tag();

}  // namespace wisar
