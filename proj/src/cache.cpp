#include "varex/cache.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "varex/errors.hpp"
#include "varex/formula_text.hpp"

namespace varex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path entry_path(const fs::path &cache_dir, const char *kind, const std::string &input_hash,
                    const char *ext) {
    return cache_dir / kind / (input_hash + ext);
}

void write_file(const fs::path &path, const std::string &content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw IoError(tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::optional<std::string> read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json block_to_json(const CodeBlock &block) {
    json j;
    j["condition"] = to_string(block.condition);
    j["pc"] = to_string(block.presence_condition);
    j["start"] = block.start_line;
    j["end"] = block.end_line;
    j["children"] = json::array();
    for (const auto &child : block.children)
        j["children"].push_back(block_to_json(child));
    return j;
}

CodeBlock block_from_json(const json &j) {
    CodeBlock block;
    block.condition = parse_formula(j.at("condition").get<std::string>());
    block.presence_condition = parse_formula(j.at("pc").get<std::string>());
    block.start_line = j.at("start").get<int>();
    block.end_line = j.at("end").get<int>();
    for (const auto &child : j.at("children"))
        block.children.push_back(block_from_json(child));
    return block;
}

char class_char(LineClass c) {
    switch (c) {
    case LineClass::Code:
        return 'c';
    case LineClass::Blank:
        return 'b';
    case LineClass::Comment:
        return 'm';
    case LineClass::Directive:
        return 'd';
    }
    return '?';
}

LineClass class_from_char(char c) {
    switch (c) {
    case 'c':
        return LineClass::Code;
    case 'b':
        return LineClass::Blank;
    case 'm':
        return LineClass::Comment;
    case 'd':
        return LineClass::Directive;
    default:
        throw std::runtime_error("bad line class");
    }
}

} // namespace

void cache_write_code(const std::vector<SourceFileBlocks> &model, const fs::path &cache_dir,
                      const std::string &input_hash) {
    json files = json::array();
    for (const auto &file : model) {
        json jf;
        jf["path"] = file.path;
        jf["line_count"] = file.line_count;
        std::string classes;
        classes.reserve(file.line_classes.size());
        for (LineClass c : file.line_classes)
            classes += class_char(c);
        jf["classes"] = classes;
        jf["blocks"] = json::array();
        for (const auto &block : file.top_blocks)
            jf["blocks"].push_back(block_to_json(block));
        files.push_back(std::move(jf));
    }
    write_file(entry_path(cache_dir, "code", input_hash, ".json"), json{{"files", files}}.dump());
}

std::optional<std::vector<SourceFileBlocks>> cache_read_code(const fs::path &cache_dir,
                                                             const std::string &input_hash,
                                                             Diagnostics &diag) {
    fs::path path = entry_path(cache_dir, "code", input_hash, ".json");
    auto content = read_file(path);
    if (!content)
        return std::nullopt;
    try {
        json j = json::parse(*content);
        std::vector<SourceFileBlocks> model;
        for (const auto &jf : j.at("files")) {
            SourceFileBlocks file;
            file.path = jf.at("path").get<std::string>();
            file.line_count = jf.at("line_count").get<int>();
            for (char c : jf.at("classes").get<std::string>())
                file.line_classes.push_back(class_from_char(c));
            if (static_cast<int>(file.line_classes.size()) != file.line_count)
                throw std::runtime_error("line class count mismatch");
            for (const auto &jb : jf.at("blocks"))
                file.top_blocks.push_back(block_from_json(jb));
            model.push_back(std::move(file));
        }
        return model;
    } catch (const std::exception &e) {
        diag.warn("cache", "corrupt cache file " + path.string() + " (" + e.what() +
                               "), re-extracting");
        return std::nullopt;
    }
}

void cache_write_build(const BuildModel &model, const fs::path &cache_dir,
                       const std::string &input_hash) {
    write_file(entry_path(cache_dir, "build", input_hash, ".csv"), build_model_to_csv(model));
}

std::optional<BuildModel> cache_read_build(const fs::path &cache_dir,
                                           const std::string &input_hash, Diagnostics &diag) {
    fs::path path = entry_path(cache_dir, "build", input_hash, ".csv");
    if (!fs::is_regular_file(path))
        return std::nullopt;
    try {
        return load_build_model_csv(path);
    } catch (const std::exception &e) {
        diag.warn("cache", "corrupt cache file " + path.string() + " (" + e.what() +
                               "), re-extracting");
        return std::nullopt;
    }
}

void cache_write_vm(const VariabilityModel &model, const fs::path &cache_dir,
                    const std::string &input_hash) {
    write_file(entry_path(cache_dir, "vm", input_hash, ".dimacs"), serialize_dimacs(model));
}

std::optional<VariabilityModel> cache_read_vm(const fs::path &cache_dir,
                                              const std::string &input_hash, Diagnostics &diag) {
    fs::path path = entry_path(cache_dir, "vm", input_hash, ".dimacs");
    auto content = read_file(path);
    if (!content)
        return std::nullopt;
    try {
        Diagnostics ignored;
        return parse_dimacs(*content, path.generic_string(), ignored);
    } catch (const std::exception &e) {
        diag.warn("cache", "corrupt cache file " + path.string() + " (" + e.what() +
                               "), re-extracting");
        return std::nullopt;
    }
}

} // namespace varex
