#include "varex/config.hpp"

#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "varex/errors.hpp"
#include "varex/pipeline.hpp"

namespace varex {

namespace fs = std::filesystem;

std::optional<std::string> ExperimentConfig::get(const std::string &key) const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
        if (it->first == key)
            return it->second;
    return std::nullopt;
}

std::string ExperimentConfig::get_or(const std::string &key, const std::string &fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

bool ExperimentConfig::get_bool(const std::string &key, bool fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    if (*v == "true" || *v == "yes" || *v == "1")
        return true;
    if (*v == "false" || *v == "no" || *v == "0")
        return false;
    throw ConfigInvalid(key + " must be a boolean, got '" + *v + "'");
}

long ExperimentConfig::get_long(const std::string &key, long fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    try {
        std::size_t used = 0;
        long parsed = std::stol(*v, &used);
        if (used != v->size())
            throw std::invalid_argument("");
        return parsed;
    } catch (const std::exception &) {
        throw ConfigInvalid(key + " must be an integer, got '" + *v + "'");
    }
}

void ExperimentConfig::set(const std::string &key, const std::string &value) {
    for (auto &entry : entries)
        if (entry.first == key) {
            entry.second = value;
            return;
        }
    entries.emplace_back(key, value);
}

namespace {
std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
} // namespace

ExperimentConfig parse_properties(const std::string &text, Diagnostics &diag) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw MalformedLine(line_no);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw MalformedLine(line_no);
        if (config.has(key))
            diag.warn("config", "duplicate key '" + key + "' at line " + std::to_string(line_no) +
                                    ", last value wins");
        config.entries.emplace_back(std::move(key), std::move(value));
    }
    return config;
}

std::string serialize_properties(const ExperimentConfig &config) {
    std::string out;
    std::set<std::string> emitted;
    // later duplicates won, emit the effective value once per key
    for (const auto &entry : config.entries) {
        if (!emitted.insert(entry.first).second)
            continue;
        out += entry.first + " = " + *config.get(entry.first) + "\n";
    }
    return out;
}

std::optional<std::string> resolve_component_alias(const std::string &name) {
    static const std::map<std::string, std::string> aliases = {
        {"CodeBlockExtractor", "CodeBlockExtractor"},
        {"BlockExtractor", "CodeBlockExtractor"},
        {"DimacsVmExtractor", "DimacsVmExtractor"},
        {"DIMACSVariabilityModelExtractor", "DimacsVmExtractor"},
        {"DimacsVariabilityModelExtractor", "DimacsVmExtractor"},
        {"KbuildExtractor", "KbuildExtractor"},
        {"KbuildMinerExtractor", "KbuildExtractor"},
        {"KBuildMinerExtractor", "KbuildExtractor"},
        {"CsvBuildModel", "CsvBuildModel"},
        {"UnDeadAnalysis", "UnDeadAnalysis"},
        {"PcFinder", "PcFinder"},
        {"FeatureEffectFinder", "FeatureEffectFinder"},
        {"ConfigurationMismatches", "ConfigurationMismatches"},
        {"MetricsPerFile", "MetricsPerFile"},
        {"MetricsRunner", "MetricsPerFile"},
        {"ConfiguredPipelineAnalysis", "ConfiguredPipelineAnalysis"},
    };
    // accept fully qualified class-path spellings
    std::string short_name = name;
    if (auto dot = name.rfind('.'); dot != std::string::npos)
        short_name = name.substr(dot + 1);
    if (auto it = aliases.find(short_name); it != aliases.end())
        return it->second;
    return std::nullopt;
}

namespace {

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys = {
        "source_tree", "output_dir", "plugins_dir", "cache_dir",
        "log.dir", "log.level", "log.console", "log.file",
        "archive", "archive.dir", "archive.include_inputs",
        "code.extractor", "code.extractor.file_regex", "code.extractor.handle_macros",
        "code.extractor.variable_regex", "code.provider.timeout",
        "code.provider.cache.write", "code.provider.cache.read",
        "build.extractor", "build.extractor.csv_path",
        "variability.extractor", "variability.input_file",
        "analysis", "analysis.pipeline", "analysis.output.format", "analysis.round_decimals",
        "analysis.relevant_features_only", "analysis.force_sequential",
        "analysis.report_intermediates", "analysis.pc_finder.conjoin_build_pc",
    };
    return keys;
}

void collect_terminals(const PipelineNode &node, std::set<std::string> &out) {
    out.insert(node.component);
    for (const auto &arg : node.args)
        collect_terminals(arg, out);
}

} // namespace

void validate_config(const ExperimentConfig &config, Diagnostics &diag) {
    std::vector<std::string> problems;

    for (const auto &[key, value] : config.entries)
        if (!known_keys().count(key))
            diag.warn("config", "unknown key ignored: " + key);
    if (config.has("plugins_dir"))
        diag.warn("config", "plugins_dir is accepted for compatibility but unused");

    auto check_regex = [&](const std::string &key) {
        if (auto v = config.get(key)) {
            try {
                std::regex re(*v);
            } catch (const std::regex_error &) {
                problems.push_back(key + " is not a valid regex: " + *v);
            }
        }
    };

    // simple per-key checks
    try {
        if (auto v = config.get("log.level"))
            parse_log_level(*v);
    } catch (const ConfigInvalid &e) {
        problems.push_back(e.what());
    }
    try {
        if (auto v = config.get("analysis.output.format"))
            parse_output_format(*v);
    } catch (const ConfigInvalid &e) {
        problems.push_back(e.what());
    }
    try {
        if (config.get_long("analysis.round_decimals", 2) < 0)
            problems.push_back("analysis.round_decimals must be >= 0");
    } catch (const ConfigInvalid &e) {
        problems.push_back(e.what());
    }
    try {
        if (config.get_long("code.provider.timeout", 0) < 0)
            problems.push_back("code.provider.timeout must be >= 0 (0 disables the timeout)");
    } catch (const ConfigInvalid &e) {
        problems.push_back(e.what());
    }
    for (const char *key :
         {"log.console", "log.file", "archive", "archive.include_inputs",
          "code.extractor.handle_macros", "code.provider.cache.write", "code.provider.cache.read",
          "analysis.relevant_features_only", "analysis.force_sequential",
          "analysis.report_intermediates", "analysis.pc_finder.conjoin_build_pc"}) {
        try {
            config.get_bool(key, false);
        } catch (const ConfigInvalid &e) {
            problems.push_back(e.what());
        }
    }
    check_regex("code.extractor.file_regex");
    check_regex("code.extractor.variable_regex");

    // component resolution
    auto resolve = [&](const std::string &key) -> std::optional<std::string> {
        auto v = config.get(key);
        if (!v)
            return std::nullopt;
        auto resolved = resolve_component_alias(*v);
        if (!resolved) {
            problems.push_back(key + " names an unknown component: " + *v);
            return std::nullopt;
        }
        return resolved;
    };
    auto code_extractor = resolve("code.extractor");
    auto build_extractor = resolve("build.extractor");
    auto vm_extractor = resolve("variability.extractor");
    auto analysis = resolve("analysis");

    if (!config.has("output_dir"))
        problems.push_back("output_dir is required");
    if (!config.has("analysis"))
        problems.push_back("analysis is required");

    if (code_extractor && *code_extractor != "CodeBlockExtractor")
        problems.push_back("code.extractor must be the CodeBlockExtractor, got " + *code_extractor);
    if (build_extractor && *build_extractor != "KbuildExtractor" &&
        *build_extractor != "CsvBuildModel")
        problems.push_back("build.extractor must be KbuildExtractor or CsvBuildModel");
    if (vm_extractor && *vm_extractor != "DimacsVmExtractor")
        problems.push_back("variability.extractor must be the DimacsVmExtractor");

    if (code_extractor) {
        auto tree = config.get("source_tree");
        if (!tree)
            problems.push_back("source_tree is required by the code extractor");
        else if (!fs::is_directory(*tree))
            problems.push_back("source_tree does not exist: " + *tree);
    }
    if (build_extractor == "KbuildExtractor") {
        auto tree = config.get("source_tree");
        if (!tree)
            problems.push_back("source_tree is required by the Kbuild extractor");
    }
    if (build_extractor == "CsvBuildModel") {
        auto csv = config.get("build.extractor.csv_path");
        if (!csv)
            problems.push_back("build.extractor.csv_path is required by CsvBuildModel");
        else if (!fs::is_regular_file(*csv))
            problems.push_back("build.extractor.csv_path does not exist: " + *csv);
    }
    if (vm_extractor) {
        auto file = config.get("variability.input_file");
        if (!file)
            problems.push_back("variability.input_file is required by the DIMACS extractor");
        else if (!fs::is_regular_file(*file))
            problems.push_back("variability.input_file does not exist: " + *file);
    }

    // analysis dependencies (needed extractors must be configured)
    std::set<std::string> used_terminals;
    if (analysis == "ConfiguredPipelineAnalysis") {
        auto dsl = config.get("analysis.pipeline");
        if (!dsl) {
            problems.push_back("analysis.pipeline is required by ConfiguredPipelineAnalysis");
        } else {
            try {
                collect_terminals(parse_pipeline_dsl(*dsl), used_terminals);
            } catch (const std::exception &e) {
                problems.push_back(e.what());
            }
        }
    } else if (analysis == "UnDeadAnalysis") {
        used_terminals = {"cmComponent", "bmComponent", "vmComponent"};
    } else if (analysis == "MetricsPerFile") {
        used_terminals = {"cmComponent"};
    } else if (analysis == "PcFinder" || analysis == "FeatureEffectFinder") {
        used_terminals = {"cmComponent"};
        if (build_extractor)
            used_terminals.insert("bmComponent");
    } else if (analysis == "ConfigurationMismatches") {
        used_terminals = {"cmComponent", "vmComponent"};
        if (build_extractor)
            used_terminals.insert("bmComponent");
    } else if (analysis && !analysis->empty()) {
        problems.push_back("analysis must name an analysis component, got " + *analysis);
    }
    if (used_terminals.count("cmComponent") && !code_extractor)
        problems.push_back("the analysis consumes the code model but code.extractor is not set");
    if (used_terminals.count("bmComponent") && !build_extractor)
        problems.push_back("the analysis consumes the build model but build.extractor is not set");
    if (used_terminals.count("vmComponent") && !vm_extractor)
        problems.push_back(
            "the analysis consumes the variability model but variability.extractor is not set");

    if (!problems.empty()) {
        std::string joined;
        for (const auto &p : problems) {
            if (!joined.empty())
                joined += "; ";
            joined += p;
        }
        throw ConfigInvalid(joined);
    }
}

} // namespace varex
