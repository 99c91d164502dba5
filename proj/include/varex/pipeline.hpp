#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "varex/config.hpp"
#include "varex/result_table.hpp"

namespace varex {

inline constexpr const char *kToolVersion = "0.1.0";

/// One node of the analysis pipeline DSL, e.g.
/// FeatureEffectFinder(PcFinder(cmComponent(), bmComponent())).
struct PipelineNode {
    std::string component;
    std::vector<PipelineNode> args;
};

struct ComponentInfo {
    int min_args;
    int max_args;
};

/// Compiled-in registry of DSL components (terminals and analyses).
const std::map<std::string, ComponentInfo> &component_registry();

/// Parses the DSL and checks component names and arities.
PipelineNode parse_pipeline_dsl(const std::string &text);

struct RunManifest {
    std::string tool_version;
    std::string hash_algorithm;
    std::string timestamp; // UTC yyyyMMdd-HHmmss
    ExperimentConfig config;
    std::map<std::string, std::string> input_hashes; // pipeline -> hash
    struct Output {
        std::string table; // logical name, stable across runs
        std::string file;  // absolute path
        std::string hash;
    };
    std::vector<Output> outputs;
    std::map<std::string, double> timings_ms;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

/// Executes the configured experiment: extraction pipelines (parallel by
/// default), the analysis pipeline, result/manifest writing and optional
/// archiving. The manifest lists every written result file.
RunManifest run_experiment(const ExperimentConfig &config);

} // namespace varex
