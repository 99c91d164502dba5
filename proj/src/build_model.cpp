#include "varex/build_model.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "varex/errors.hpp"
#include "varex/formula_text.hpp"

namespace varex {

namespace fs = std::filesystem;

std::string normalize_path(const std::string &path) {
    return fs::path(path).lexically_normal().generic_string();
}

namespace {

struct KbuildScan {
    const fs::path root;
    const std::vector<std::string> &entry_names;
    Diagnostics &diag;
    // object path (root-relative, .o) -> collected PCs
    std::map<std::string, std::vector<Formula>> objects;
    std::set<std::string> active_dirs; // cycle guard
};

std::vector<std::string> logical_lines(const fs::path &file) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line, joined;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty() && line.back() == '\\') {
            line.pop_back();
            joined += line + " ";
            continue;
        }
        joined += line;
        lines.push_back(joined);
        joined.clear();
    }
    if (!joined.empty())
        lines.push_back(joined);
    return lines;
}

std::vector<std::string> split_items(const std::string &rhs) {
    std::istringstream in(rhs);
    std::vector<std::string> items;
    std::string item;
    while (in >> item)
        items.push_back(item);
    return items;
}

void scan_makefile(KbuildScan &scan, const fs::path &dir, const Formula &pc);

void recurse_dir(KbuildScan &scan, const fs::path &dir, const std::string &sub,
                 const Formula &pc) {
    fs::path target = dir / sub;
    std::error_code ec;
    fs::path canonical = fs::weakly_canonical(target, ec);
    std::string key = canonical.generic_string();
    if (scan.active_dirs.count(key))
        throw CycleDetected(target.generic_string());
    scan.active_dirs.insert(key);
    scan_makefile(scan, target, pc);
    scan.active_dirs.erase(key);
}

void scan_makefile(KbuildScan &scan, const fs::path &dir, const Formula &pc) {
    static const std::regex entry_re(
        R"(^\s*([A-Za-z0-9_]+)-(y|m|objs|\$\(([A-Za-z0-9_]+)\))\s*[:+]?=\s*(.*)$)");
    static const std::regex make_cond_re(R"(^\s*(ifeq|ifneq|ifdef|ifndef|else|endif)\b.*)");

    fs::path makefile;
    for (const auto &name : scan.entry_names)
        if (fs::is_regular_file(dir / name)) {
            makefile = dir / name;
            break;
        }
    if (makefile.empty()) {
        scan.diag.warn("build-extractor", "no makefile in " + dir.generic_string());
        return;
    }

    std::string rel_dir = fs::relative(dir, scan.root).generic_string();
    auto rel_path = [&](const std::string &name) {
        return normalize_path(rel_dir == "." ? name : rel_dir + "/" + name);
    };

    // composite stem -> (part object, extra condition)
    std::map<std::string, std::vector<std::pair<std::string, Formula>>> composites;

    for (const auto &line : logical_lines(makefile)) {
        std::smatch m;
        if (std::regex_match(line, m, make_cond_re)) {
            scan.diag.warn("build-extractor",
                           makefile.generic_string() + ": Make conditional ignored: " + line);
            continue;
        }
        if (line.find("$(call ") != std::string::npos) {
            scan.diag.warn("build-extractor",
                           makefile.generic_string() + ": $(call ...) line ignored: " + line);
            continue;
        }
        if (!std::regex_match(line, m, entry_re))
            continue;
        const std::string stem = m[1];
        const std::string suffix = m[2];
        const std::string var = m[3];
        const std::string rhs = m[4];

        Formula term = Formula::true_const();
        if (!var.empty()) {
            if (var.rfind("CONFIG_", 0) != 0) {
                scan.diag.warn("build-extractor", makefile.generic_string() +
                                   ": non-CONFIG variable ignored: " + var);
                continue;
            }
            term = Formula::var(var);
        }
        // tristate collapse: y, m and =m all map to the same boolean
        if (stem == "obj" || stem == "lib") {
            Formula item_pc = term.is_true() ? pc : simplify(Formula::conjunction({pc, term}));
            for (const auto &item : split_items(rhs)) {
                if (!item.empty() && item.back() == '/') {
                    recurse_dir(scan, dir, item.substr(0, item.size() - 1), item_pc);
                } else if (item.size() > 2 && item.ends_with(".o")) {
                    scan.objects[rel_path(item)].push_back(item_pc);
                }
            }
        } else {
            for (const auto &item : split_items(rhs))
                if (item.size() > 2 && item.ends_with(".o"))
                    composites[stem].emplace_back(rel_path(item), term);
        }
    }

    for (const auto &[stem, parts] : composites) {
        auto it = scan.objects.find(rel_path(stem + ".o"));
        if (it == scan.objects.end()) {
            scan.diag.warn("build-extractor", makefile.generic_string() + ": composite " + stem +
                               " has no obj- entry, parts ignored");
            continue;
        }
        Formula owner_pc = simplify(Formula::disjunction(it->second));
        for (const auto &[part, extra] : parts) {
            Formula part_pc =
                extra.is_true() ? owner_pc : simplify(Formula::conjunction({owner_pc, extra}));
            scan.objects[part].push_back(part_pc);
        }
        // the composite container itself is not a source file
        scan.objects.erase(rel_path(stem + ".o"));
    }
}

} // namespace

BuildModel parse_kbuild_tree(const fs::path &root, const std::vector<std::string> &entry_names,
                             Diagnostics &diag) {
    if (!fs::is_directory(root))
        throw BuildTreeMissing(root.string());
    KbuildScan scan{root, entry_names, diag, {}, {}};
    std::error_code ec;
    scan.active_dirs.insert(fs::weakly_canonical(root, ec).generic_string());
    scan_makefile(scan, root, Formula::true_const());

    BuildModel bm;
    bm.source_path = root.generic_string();
    for (const auto &[obj, pcs] : scan.objects) {
        std::string source = obj.substr(0, obj.size() - 2) + ".c";
        if (!fs::exists(root / source)) {
            std::string asm_source = obj.substr(0, obj.size() - 2) + ".S";
            if (fs::exists(root / asm_source)) {
                source = asm_source;
            } else {
                diag.warn("build-extractor",
                          "no source file found for object " + obj + ", recording " + source);
            }
        }
        bm.presence_conditions[normalize_path(source)] = simplify(Formula::disjunction(pcs));
    }
    return bm;
}

namespace {
std::string csv_quote(const std::string &cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}
} // namespace

BuildModel load_build_model_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path.string());
    BuildModel bm;
    bm.source_path = path.generic_string();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line_no == 1) {
            if (line != "path,presence_condition")
                throw MalformedHeader("expected 'path,presence_condition', got '" + line + "'");
            continue;
        }
        if (line.empty())
            continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos || comma == 0)
            throw MalformedRow(line_no);
        std::string file = line.substr(0, comma);
        std::string pc_text = line.substr(comma + 1);
        try {
            bm.presence_conditions[normalize_path(file)] = parse_formula(pc_text);
        } catch (const FormulaSyntaxError &e) {
            throw FormulaSyntaxError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return bm;
}

std::string build_model_to_csv(const BuildModel &bm) {
    std::string out = "path,presence_condition\n";
    for (const auto &[path, pc] : bm.presence_conditions)
        out += csv_quote(path) + "," + to_string(pc) + "\n";
    return out;
}

} // namespace varex
