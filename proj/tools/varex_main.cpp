// varex: configuration-driven variability analysis for C code bases.
//
//   varex run <config.properties>      execute an experiment
//   varex validate <config.properties> check a configuration only
//   varex rerun <archive.zip>          reproduce an archived experiment
//   varex components                   list registered components
//
// A bare config path is accepted as shorthand for `run`. Result file
// paths go to stdout (one per line); progress and errors to stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "varex/archive.hpp"
#include "varex/config.hpp"
#include "varex/errors.hpp"
#include "varex/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitReproduction = 3;

struct Overrides {
    std::string output_dir;
    std::string log_level;
    bool force_sequential = false;
    bool no_archive = false;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw varex::IoError(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

varex::ExperimentConfig load_config(const std::string &path, const Overrides &overrides,
                                    varex::Diagnostics &diag) {
    varex::ExperimentConfig config = varex::parse_properties(read_file(path), diag);
    // flags override config keys; the manifest records the effective values
    if (!overrides.output_dir.empty())
        config.set("output_dir", overrides.output_dir);
    if (!overrides.log_level.empty())
        config.set("log.level", overrides.log_level);
    if (overrides.force_sequential)
        config.set("analysis.force_sequential", "true");
    if (overrides.no_archive)
        config.set("archive", "false");
    return config;
}

int cmd_run(const std::string &config_path, const Overrides &overrides) {
    varex::Diagnostics diag;
    varex::ExperimentConfig config = load_config(config_path, overrides, diag);
    varex::RunManifest manifest = varex::run_experiment(config);
    for (const auto &out : manifest.outputs)
        std::cout << out.file << '\n';
    return kExitOk;
}

int cmd_validate(const std::string &config_path, const Overrides &overrides) {
    varex::Diagnostics diag;
    varex::ExperimentConfig config = load_config(config_path, overrides, diag);
    varex::validate_config(config, diag);
    std::cerr << "configuration is valid\n";
    return kExitOk;
}

int cmd_rerun(const std::string &archive_path) {
    varex::RunManifest manifest = varex::rerun_archive(archive_path);
    std::cerr << "ReproductionMatch\n";
    for (const auto &out : manifest.outputs)
        std::cout << out.file << '\n';
    return kExitOk;
}

int cmd_components() {
    for (const auto &[name, info] : varex::component_registry()) {
        std::cerr << name << " (inputs: " << info.min_args;
        if (info.max_args != info.min_args)
            std::cerr << ".." << info.max_args;
        std::cerr << ")\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"variability analysis workbench for C code bases"};
    app.require_subcommand(0, 1);

    Overrides overrides;
    std::string config_path, archive_path, bare_path;

    app.add_option("config", bare_path, "configuration file (shorthand for `run`)");

    auto *run = app.add_subcommand("run", "execute an experiment");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--output-dir", overrides.output_dir, "override output_dir");
    run->add_option("--log-level", overrides.log_level, "override log.level");
    run->add_flag("--force-sequential", overrides.force_sequential,
                  "disable parallel extraction");
    run->add_flag("--no-archive", overrides.no_archive, "disable archiving");

    auto *validate = app.add_subcommand("validate", "validate a configuration");
    validate->add_option("config", config_path, "configuration file")->required();

    auto *rerun = app.add_subcommand("rerun", "reproduce an archived experiment");
    rerun->add_option("archive", archive_path, "experiment archive (zip)")->required();

    auto *components = app.add_subcommand("components", "list registered components");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        std::stringstream out;
        int code = app.exit(e, out, out);
        std::cerr << out.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, overrides);
        if (validate->parsed())
            return cmd_validate(config_path, overrides);
        if (rerun->parsed())
            return cmd_rerun(archive_path);
        if (components->parsed())
            return cmd_components();
        if (!bare_path.empty())
            return cmd_run(bare_path, overrides);
        std::cerr << app.help();
        return kExitConfig;
    } catch (const varex::ReproductionMismatch &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitReproduction;
    } catch (const varex::ConfigInvalid &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const varex::MalformedLine &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const varex::IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
