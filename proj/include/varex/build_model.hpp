#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "varex/diagnostics.hpp"
#include "varex/formula.hpp"

namespace varex {

/// Map from normalized repository-relative source paths to the presence
/// condition under which the build compiles them. Files absent from the
/// map have no build PC; consumers treat that as TrueConst with a warning.
struct BuildModel {
    std::map<std::string, Formula> presence_conditions;
    std::string source_path;
};

std::string normalize_path(const std::string &path);

/// Kbuild-style extraction: obj-$(CONFIG_X)/obj-y/obj-m lists, directory
/// recursion, composite objects (foo-objs/foo-y), continuations,
/// disjunction for multiply-reachable files. Unrecognized lines are
/// ignored (Make conditionals and non-CONFIG variables warn).
BuildModel parse_kbuild_tree(const std::filesystem::path &root,
                             const std::vector<std::string> &entry_makefile_names,
                             Diagnostics &diag);

/// CSV fallback: header "path,presence_condition", PC column in formula
/// surface syntax. Parse errors are per-row fatal.
BuildModel load_build_model_csv(const std::filesystem::path &path);

std::string build_model_to_csv(const BuildModel &bm);

} // namespace varex
