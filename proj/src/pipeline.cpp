#include "varex/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "varex/analyses.hpp"
#include "varex/archive.hpp"
#include "varex/block_extractor.hpp"
#include "varex/cache.hpp"
#include "varex/errors.hpp"
#include "varex/hash.hpp"

namespace varex {

namespace fs = std::filesystem;
using nlohmann::json;

const std::map<std::string, ComponentInfo> &component_registry() {
    static const std::map<std::string, ComponentInfo> registry = {
        {"cmComponent", {0, 0}},
        {"bmComponent", {0, 0}},
        {"vmComponent", {0, 0}},
        {"PcFinder", {1, 2}},
        {"FeatureEffectFinder", {1, 1}},
        {"ConfigurationMismatches", {2, 2}},
        {"UnDeadAnalysis", {3, 3}},
        {"MetricsPerFile", {1, 1}},
    };
    return registry;
}

namespace {

class DslParser {
public:
    explicit DslParser(const std::string &text) : text_(text) {}

    PipelineNode parse() {
        PipelineNode node = parse_node();
        skip_ws();
        if (pos_ != text_.size())
            throw DslSyntaxError(pos_);
        return node;
    }

private:
    PipelineNode parse_node() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start)
            throw DslSyntaxError(pos_);
        PipelineNode node;
        node.component = text_.substr(start, pos_ - start);
        auto it = component_registry().find(node.component);
        if (it == component_registry().end())
            throw UnknownComponent(node.component);
        if (!accept('('))
            throw DslSyntaxError(pos_);
        skip_ws();
        if (!accept(')')) {
            node.args.push_back(parse_node());
            while (accept(','))
                node.args.push_back(parse_node());
            if (!accept(')'))
                throw DslSyntaxError(pos_);
        }
        const auto &info = it->second;
        int got = static_cast<int>(node.args.size());
        if (got < info.min_args || got > info.max_args) {
            std::string expected = info.min_args == info.max_args
                                       ? std::to_string(info.min_args)
                                       : std::to_string(info.min_args) + ".." +
                                             std::to_string(info.max_args);
            throw ArityMismatch(node.component, expected, got);
        }
        return node;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string &text_;
    std::size_t pos_ = 0;
};

} // namespace

PipelineNode parse_pipeline_dsl(const std::string &text) { return DslParser(text).parse(); }

// ---------------------------------------------------------------------------
// Experiment execution

namespace {

std::string utc_stamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return buf;
}

std::string read_file_or_throw(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

using StageValue = std::variant<std::monostate, std::vector<SourceFileBlocks>, BuildModel,
                                VariabilityModel, PcMap, std::vector<FeatureEffectEntry>,
                                ResultTable>;

struct Models {
    std::optional<std::vector<SourceFileBlocks>> code;
    std::optional<BuildModel> build;
    std::optional<VariabilityModel> vm;
};

struct ExecContext {
    const ExperimentConfig &config;
    Models models;
    Diagnostics &diag;
    std::vector<ResultTable> extra_tables;       // always written (e.g. missing features)
    std::vector<ResultTable> intermediate_tables;
    bool report_intermediates = false;
    std::string variable_regex;
    std::map<std::string, double> *timings = nullptr;
};

void note_intermediate(ExecContext &ctx, ResultTable table) {
    if (ctx.report_intermediates)
        ctx.intermediate_tables.push_back(std::move(table));
}

StageValue evaluate_node(const PipelineNode &node, ExecContext &ctx) {
    std::vector<StageValue> args;
    args.reserve(node.args.size());
    for (const auto &arg : node.args)
        args.push_back(evaluate_node(arg, ctx));

    auto started = std::chrono::steady_clock::now();
    auto record = [&](const char *stage) {
        if (ctx.timings) {
            double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
            (*ctx.timings)["analysis." + std::string(stage)] += ms;
        }
    };

    try {
        if (node.component == "cmComponent")
            return *ctx.models.code;
        if (node.component == "bmComponent")
            return *ctx.models.build;
        if (node.component == "vmComponent")
            return *ctx.models.vm;
        if (node.component == "PcFinder") {
            const auto &code = std::get<std::vector<SourceFileBlocks>>(args[0]);
            const BuildModel *build =
                args.size() > 1 ? &std::get<BuildModel>(args[1]) : nullptr;
            bool conjoin = ctx.config.get_bool("analysis.pc_finder.conjoin_build_pc", true);
            PcMap pcs = pc_finder(code, build, ctx.diag, conjoin);
            note_intermediate(ctx, pc_map_table(pcs));
            record("PcFinder");
            return pcs;
        }
        if (node.component == "FeatureEffectFinder") {
            const auto &pcs = std::get<PcMap>(args[0]);
            auto entries = feature_effect(pcs);
            if (ctx.config.get_bool("analysis.relevant_features_only", false))
                entries = filter_relevant(std::move(entries),
                                          ctx.models.vm ? &*ctx.models.vm : nullptr);
            note_intermediate(ctx, feature_effect_table(entries));
            record("FeatureEffectFinder");
            return entries;
        }
        if (node.component == "ConfigurationMismatches") {
            const auto &fes = std::get<std::vector<FeatureEffectEntry>>(args[0]);
            const auto &vm = std::get<VariabilityModel>(args[1]);
            ResultTable table = configuration_mismatches(fes, vm);
            record("ConfigurationMismatches");
            return table;
        }
        if (node.component == "UnDeadAnalysis") {
            const auto &code = std::get<std::vector<SourceFileBlocks>>(args[0]);
            const auto &build = std::get<BuildModel>(args[1]);
            const auto &vm = std::get<VariabilityModel>(args[2]);
            ResultTable dead = undead_analysis(code, build, vm, ctx.diag);
            ctx.extra_tables.push_back(
                missing_features(code, build, vm, ctx.variable_regex, ctx.diag));
            record("UnDeadAnalysis");
            return dead;
        }
        if (node.component == "MetricsPerFile") {
            const auto &code = std::get<std::vector<SourceFileBlocks>>(args[0]);
            ResultTable table = metrics_per_file(code, ctx.variable_regex);
            record("MetricsPerFile");
            return table;
        }
    } catch (const std::bad_variant_access &) {
        throw AnalysisFailed(node.component, "upstream component produced the wrong model kind");
    }
    throw UnknownComponent(node.component);
}

ResultTable to_result_table(StageValue value, const std::string &component) {
    if (auto *table = std::get_if<ResultTable>(&value))
        return std::move(*table);
    if (auto *pcs = std::get_if<PcMap>(&value))
        return pc_map_table(*pcs);
    if (auto *fes = std::get_if<std::vector<FeatureEffectEntry>>(&value))
        return feature_effect_table(*fes);
    throw AnalysisFailed(component, "pipeline root must produce an analysis result, not a model");
}

ExtractOptions extract_options(const ExperimentConfig &config) {
    ExtractOptions options;
    options.file_regex = config.get_or("code.extractor.file_regex", options.file_regex);
    options.variable_regex =
        config.get_or("code.extractor.variable_regex", options.variable_regex);
    options.handle_macros = config.get_bool("code.extractor.handle_macros", false);
    return options;
}

std::string code_input_hash(const fs::path &root, const ExtractOptions &options) {
    const std::regex file_re(options.file_regex);
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
        if (!it->is_regular_file())
            continue;
        if (std::regex_match(fs::relative(it->path(), root).generic_string(), file_re))
            files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());
    std::string acc = options.file_regex + "\n" + options.variable_regex + "\n" +
                      (options.handle_macros ? "macros\n" : "nomacros\n");
    for (const auto &p : files) {
        acc += fs::relative(p, root).generic_string();
        acc += '\0';
        acc += sha256_file(p) + "\n";
    }
    return sha256_hex(acc);
}

std::string kbuild_input_hash(const fs::path &root, const std::vector<std::string> &entry_names) {
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
        if (!it->is_regular_file())
            continue;
        for (const auto &name : entry_names)
            if (it->path().filename() == name)
                files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());
    std::string acc;
    for (const auto &p : files) {
        acc += fs::relative(p, root).generic_string();
        acc += '\0';
        acc += sha256_file(p) + "\n";
    }
    return sha256_hex(acc);
}

PipelineNode analysis_pipeline(const ExperimentConfig &config) {
    std::string analysis = *resolve_component_alias(*config.get("analysis"));
    if (analysis == "ConfiguredPipelineAnalysis")
        return parse_pipeline_dsl(*config.get("analysis.pipeline"));
    const bool with_build = config.has("build.extractor");
    auto cm = PipelineNode{"cmComponent", {}};
    auto bm = PipelineNode{"bmComponent", {}};
    auto vm = PipelineNode{"vmComponent", {}};
    auto pc_finder_node = [&] {
        PipelineNode n{"PcFinder", {cm}};
        if (with_build)
            n.args.push_back(bm);
        return n;
    };
    if (analysis == "UnDeadAnalysis")
        return {"UnDeadAnalysis", {cm, bm, vm}};
    if (analysis == "MetricsPerFile")
        return {"MetricsPerFile", {cm}};
    if (analysis == "PcFinder")
        return pc_finder_node();
    if (analysis == "FeatureEffectFinder")
        return {"FeatureEffectFinder", {pc_finder_node()}};
    if (analysis == "ConfigurationMismatches")
        return {"ConfigurationMismatches", {{"FeatureEffectFinder", {pc_finder_node()}}, vm}};
    throw ConfigInvalid("analysis must name an analysis component, got " + analysis);
}

void collect_components(const PipelineNode &node, std::set<std::string> &out) {
    out.insert(node.component);
    for (const auto &arg : node.args)
        collect_components(arg, out);
}

} // namespace

std::string RunManifest::to_json() const {
    json j;
    j["tool_version"] = tool_version;
    j["hash_algorithm"] = hash_algorithm;
    j["timestamp"] = timestamp;
    json jc = json::object();
    for (const auto &[key, value] : config.entries)
        jc[key] = value;
    j["config"] = jc;
    j["inputs"] = input_hashes;
    j["outputs"] = json::array();
    for (const auto &out : outputs)
        j["outputs"].push_back({{"table", out.table}, {"file", out.file}, {"hash", out.hash}});
    j["timings_ms"] = timings_ms;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

RunManifest run_experiment(const ExperimentConfig &config) {
    Diagnostics diag;
    validate_config(config, diag);

    const fs::path output_dir = *config.get("output_dir");
    fs::create_directories(output_dir);
    const std::string stamp = utc_stamp();

    const fs::path log_dir = config.get_or("log.dir", output_dir.string());
    std::string log_file_path;
    if (config.get_bool("log.file", true)) {
        fs::create_directories(log_dir);
        log_file_path = (log_dir / ("varex_" + stamp + ".log")).string();
    }
    Logger::instance().configure(parse_log_level(config.get_or("log.level", "info")),
                                 config.get_bool("log.console", false), log_file_path);
    Logger::instance().info("coordinator", "starting experiment");

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.hash_algorithm = kHashAlgorithm;
    manifest.timestamp = stamp;
    manifest.config = config;

    PipelineNode pipeline = analysis_pipeline(config);
    std::set<std::string> used;
    collect_components(pipeline, used);
    const bool need_code = used.count("cmComponent") > 0;
    const bool need_build = used.count("bmComponent") > 0;
    // the relevancy filter consumes the VM even without a vmComponent terminal
    const bool need_vm =
        used.count("vmComponent") > 0 ||
        (config.get_bool("analysis.relevant_features_only", false) &&
         config.has("variability.extractor"));

    const ExtractOptions options = extract_options(config);
    const fs::path cache_dir = config.get_or("cache_dir", (output_dir / "cache").string());
    const bool force_sequential = config.get_bool("analysis.force_sequential", false);
    const std::vector<std::string> entry_names = {"Makefile", "Kbuild"};

    Models models;
    auto run_timed = [&](const char *stage, auto fn) {
        auto started = std::chrono::steady_clock::now();
        fn();
        manifest.timings_ms[stage] = std::chrono::duration<double, std::milli>(
                                         std::chrono::steady_clock::now() - started)
                                         .count();
    };

    auto extract_code = [&] {
        const fs::path tree = *config.get("source_tree");
        std::string input_hash = code_input_hash(tree, options);
        manifest.input_hashes["code"] = input_hash;
        if (config.get_bool("code.provider.cache.read", false)) {
            if (auto cached = cache_read_code(cache_dir, input_hash, diag)) {
                Logger::instance().info("code-extractor", "cache hit");
                models.code = std::move(*cached);
                return;
            }
        }
        Deadline deadline;
        long timeout_ms = config.get_long("code.provider.timeout", 0);
        if (timeout_ms > 0)
            deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        models.code = scan_source_tree(tree, options, diag, deadline);
        if (config.get_bool("code.provider.cache.write", false))
            cache_write_code(*models.code, cache_dir, input_hash);
    };
    auto extract_build = [&] {
        std::string extractor = *resolve_component_alias(*config.get("build.extractor"));
        if (extractor == "CsvBuildModel") {
            fs::path csv = *config.get("build.extractor.csv_path");
            manifest.input_hashes["build"] = sha256_file(csv);
            models.build = load_build_model_csv(csv);
        } else {
            const fs::path tree = *config.get("source_tree");
            manifest.input_hashes["build"] = kbuild_input_hash(tree, entry_names);
            models.build = parse_kbuild_tree(tree, entry_names, diag);
        }
    };
    auto extract_vm = [&] {
        fs::path file = *config.get("variability.input_file");
        manifest.input_hashes["vm"] = sha256_file(file);
        models.vm = parse_dimacs(read_file_or_throw(file), file.generic_string(), diag);
    };

    if (force_sequential) {
        if (need_code)
            run_timed("extract.code", extract_code);
        if (need_build)
            run_timed("extract.build", extract_build);
        if (need_vm)
            run_timed("extract.vm", extract_vm);
    } else {
        // one task per configured extraction pipeline
        std::vector<std::pair<const char *, std::future<void>>> tasks;
        auto launch = [&](const char *stage, auto fn) {
            tasks.emplace_back(stage, std::async(std::launch::async, [&, stage, fn] {
                                   run_timed(stage, fn);
                               }));
        };
        if (need_code)
            launch("extract.code", extract_code);
        if (need_build)
            launch("extract.build", extract_build);
        if (need_vm)
            launch("extract.vm", extract_vm);
        std::exception_ptr failure;
        for (auto &[stage, task] : tasks) {
            try {
                task.get();
            } catch (...) {
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    ExecContext ctx{config, std::move(models), diag};
    ctx.report_intermediates = config.get_bool("analysis.report_intermediates", false);
    ctx.variable_regex = options.variable_regex;
    ctx.timings = &manifest.timings_ms;

    ResultTable main_table;
    try {
        main_table = to_result_table(evaluate_node(pipeline, ctx), pipeline.component);
    } catch (const AnalysisFailed &) {
        throw;
    } catch (const std::exception &e) {
        throw AnalysisFailed(pipeline.component, e.what());
    }
    if (ctx.report_intermediates && !ctx.intermediate_tables.empty() &&
        ctx.intermediate_tables.back().name == main_table.name)
        ctx.intermediate_tables.pop_back(); // the final stage is written anyway

    const OutputFormat format = parse_output_format(config.get_or("analysis.output.format", "csv"));
    const char *ext = format == OutputFormat::Csv ? ".csv" : ".json";
    const int decimals = static_cast<int>(config.get_long("analysis.round_decimals", 2));
    const std::string analysis_name = *resolve_component_alias(*config.get("analysis"));

    auto emit = [&](const ResultTable &table, bool main) {
        std::string base = main ? analysis_name + "_" + stamp
                                : analysis_name + "_" + table.name + "_" + stamp;
        fs::path path = output_dir / (base + ext);
        for (int i = 2; fs::exists(path); ++i)
            path = output_dir / (base + "_" + std::to_string(i) + ext);
        write_table(table, format, decimals, path);
        manifest.outputs.push_back({table.name, fs::absolute(path).string(), sha256_file(path)});
    };
    emit(main_table, true);
    for (const auto &table : ctx.extra_tables)
        emit(table, false);
    for (const auto &table : ctx.intermediate_tables)
        emit(table, false);

    manifest.warnings = diag.warnings();
    std::sort(manifest.warnings.begin(), manifest.warnings.end());

    fs::path manifest_path = output_dir / ("manifest_" + stamp + ".json");
    for (int i = 2; fs::exists(manifest_path); ++i)
        manifest_path = output_dir / ("manifest_" + stamp + "_" + std::to_string(i) + ".json");
    {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out)
            throw IoError(manifest_path.string());
        out << manifest.to_json();
    }
    if (config.get_bool("archive", false)) {
        fs::path archive_dir = config.get_or("archive.dir", output_dir.string());
        fs::create_directories(archive_dir);
        fs::path archive_path = create_archive(
            manifest, config, archive_dir, config.get_bool("archive.include_inputs", false));
        Logger::instance().info("coordinator", "archived run to " + archive_path.string());
    }
    Logger::instance().info("coordinator", "experiment finished, " +
                                               std::to_string(manifest.outputs.size()) +
                                               " result file(s)");
    return manifest;
}

} // namespace varex
