#pragma once

#include "kaclab/relation.hpp"
#include "kaclab/system.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace kaclab {

using Json = nlohmann::ordered_json;

/// Parsed experiment description. One JSON file per experiment; the raw
/// document is kept verbatim for echoing into reports. Exactly one of
/// finite/sampled is populated when the command names a system.
struct ExperimentConfig {
    std::string command;
    Json raw;
    std::optional<FiniteSystem> finite;
    std::optional<SampledSystem> sampled;

    uint64_t seed = 0;            // echoed; sampled systems are constructed with it
    uint64_t samples = 100000;
    uint64_t budget = 1000000;
    double abstain_threshold = 0.0;
    std::string report_name = "report.json";

    bool has(const std::string& key) const { return raw.contains(key); }
    const Json& at(const std::string& key) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const Json& doc);

// Field-level parsers; `field` names the config location for diagnostics.
Group parse_group(const Json& j, const std::string& field);
FiniteSystem parse_finite_system(const Json& j, const std::string& field);
SampledSystem parse_sampled_system(const Json& j, uint64_t seed, const std::string& field);
FiniteSet parse_finite_set(const Json& j, size_t n_points, const std::string& field);
SampledSet parse_sampled_set(const Json& j, const SampledSystem& ss, const std::string& field);
std::vector<Rational> parse_rationals(const Json& j, size_t n, const std::string& field);
Rational parse_rational_field(const Json& j, const std::string& field);
EquivRelation parse_relation(const Json& j, const std::string& field);
TauMap parse_tau(const Json& j, size_t n_points, const std::string& field);

} // namespace kaclab
