#include "varex/archive.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "varex/errors.hpp"
#include "varex/zip.hpp"

namespace varex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void add_tree(ZipWriter &zip, const fs::path &root, const std::string &prefix) {
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it)
        if (it->is_regular_file())
            files.push_back(it->path());
    std::sort(files.begin(), files.end());
    for (const auto &p : files)
        zip.add(prefix + fs::relative(p, root).generic_string(), slurp(p));
}

} // namespace

fs::path create_archive(const RunManifest &manifest, const ExperimentConfig &config,
                        const fs::path &dest_dir, bool include_inputs) {
    ZipWriter zip;
    zip.add("config.properties", serialize_properties(config));
    zip.add("manifest.json", manifest.to_json());
    for (const auto &out : manifest.outputs)
        zip.add("output/" + fs::path(out.file).filename().generic_string(), slurp(out.file));

    const fs::path log_dir = config.get_or("log.dir", config.get_or("output_dir", "."));
    fs::path log_file = log_dir / ("varex_" + manifest.timestamp + ".log");
    if (fs::is_regular_file(log_file))
        zip.add("log/" + log_file.filename().generic_string(), slurp(log_file));

    if (include_inputs) {
        if (auto tree = config.get("source_tree"); tree && fs::is_directory(*tree))
            add_tree(zip, *tree, "inputs/source_tree/");
        if (auto vm = config.get("variability.input_file"); vm && fs::is_regular_file(*vm))
            zip.add("inputs/vm/" + fs::path(*vm).filename().generic_string(), slurp(*vm));
        if (auto csv = config.get("build.extractor.csv_path"); csv && fs::is_regular_file(*csv))
            zip.add("inputs/build/" + fs::path(*csv).filename().generic_string(), slurp(*csv));
    }

    fs::path archive_path = dest_dir / ("experiment_" + manifest.timestamp + ".zip");
    for (int i = 2; fs::exists(archive_path); ++i)
        archive_path =
            dest_dir / ("experiment_" + manifest.timestamp + "_" + std::to_string(i) + ".zip");
    zip.write(archive_path);
    return archive_path;
}

RunManifest rerun_archive(const fs::path &archive_path) {
    auto entries = read_zip(archive_path);
    if (!entries.count("config.properties"))
        throw ArchiveIncomplete("config.properties");
    if (!entries.count("manifest.json"))
        throw ArchiveIncomplete("manifest.json");

    static std::atomic<unsigned> counter{0};
    fs::path workspace =
        fs::temp_directory_path() /
        ("varex_rerun_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(workspace);
    for (const auto &[name, data] : entries) {
        fs::path target = workspace / name;
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        if (!out)
            throw IoError(target.string());
        out << data;
    }

    Diagnostics diag;
    ExperimentConfig config = parse_properties(entries.at("config.properties"), diag);

    // rewrite path keys to the extracted workspace
    bool has_source_inputs = false;
    std::string vm_name, csv_name;
    for (const auto &[name, data] : entries) {
        if (name.rfind("inputs/source_tree/", 0) == 0)
            has_source_inputs = true;
        else if (name.rfind("inputs/vm/", 0) == 0)
            vm_name = name;
        else if (name.rfind("inputs/build/", 0) == 0)
            csv_name = name;
    }
    if (has_source_inputs)
        config.set("source_tree", (workspace / "inputs/source_tree").string());
    if (!vm_name.empty())
        config.set("variability.input_file", (workspace / vm_name).string());
    if (!csv_name.empty())
        config.set("build.extractor.csv_path", (workspace / csv_name).string());
    config.set("output_dir", (workspace / "output_rerun").string());
    config.set("cache_dir", (workspace / "cache_rerun").string());
    config.set("log.dir", (workspace / "log_rerun").string());
    config.set("archive", "false");
    config.set("code.provider.cache.read", "false");

    RunManifest rerun = run_experiment(config);

    json archived = json::parse(entries.at("manifest.json"));
    for (const auto &out : archived.at("outputs")) {
        const std::string table = out.at("table").get<std::string>();
        const std::string expected = out.at("hash").get<std::string>();
        std::string got = "absent";
        for (const auto &fresh : rerun.outputs)
            if (fresh.table == table) {
                got = fresh.hash;
                break;
            }
        if (got != expected)
            throw ReproductionMismatch(table, expected, got);
    }
    return rerun;
}

} // namespace varex
