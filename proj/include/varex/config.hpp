#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varex/diagnostics.hpp"

namespace varex {

/// Ordered key/value experiment description parsed from a properties
/// file. Unknown keys warn; required keys are checked by validate().
struct ExperimentConfig {
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string &key) const;
    std::string get_or(const std::string &key, const std::string &fallback) const;
    bool get_bool(const std::string &key, bool fallback) const;
    long get_long(const std::string &key, long fallback) const; // throws ConfigInvalid
    void set(const std::string &key, const std::string &value);
    bool has(const std::string &key) const { return get(key).has_value(); }
};

ExperimentConfig parse_properties(const std::string &text, Diagnostics &diag);
std::string serialize_properties(const ExperimentConfig &config);

/// Maps fully qualified component spellings onto the
/// compiled-in registry names; returns the name unchanged when it is
/// already a registry name, or nullopt when unknown.
std::optional<std::string> resolve_component_alias(const std::string &name);

/// Full cross-key validation: component names resolve, required inputs
/// per selected components exist, pipeline DSL parses against the
/// registry. Throws ConfigInvalid listing every problem.
void validate_config(const ExperimentConfig &config, Diagnostics &diag);

} // namespace varex
