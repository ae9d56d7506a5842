#pragma once
// JSON conversions for families, domains and asymptotic data, plus report plumbing
// (config hash, tool version, CSV writing).

#include "json.hpp"
#include <string>
#include <vector>

#include "mtcrit/domain.hpp"
#include "mtcrit/perturbation.hpp"

namespace mtc {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// Field accessors that name the offending field on failure (ConfigError).
double get_number(const Json& j, const std::string& key, double fallback);
double require_number(const Json& j, const std::string& key);
int get_int(const Json& j, const std::string& key, int fallback);
std::vector<double> get_numbers(const Json& j, const std::string& key, const std::vector<double>& fallback);

Perturbation family_from_json(const Json& j);
Json family_to_json(const Perturbation& fam);
DomainSpec domain_from_json(const Json& j);
Json domain_to_json(const DomainSpec& d);
AsymptoticData asymptotics_from_json(const Json& j);
Json asymptotics_to_json(const AsymptoticData& d);

// Hex SHA-256 of the canonical dump of the config.
std::string config_hash(const Json& config);

Json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace mtc
