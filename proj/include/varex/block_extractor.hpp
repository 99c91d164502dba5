#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "varex/code_model.hpp"
#include "varex/diagnostics.hpp"

namespace varex {

enum class DirectiveKind { Ifdef, Ifndef, If, Elif };

/// Macro definition state from unconditional top-level #define/#undef
/// lines, last write wins.
using MacroTable = std::map<std::string, bool>;

struct ExtractOptions {
    std::string file_regex = ".*\\.c";
    std::string variable_regex = "^CONFIG_\\w+$";
    bool handle_macros = false;
};

/// Parses a conditional directive body into a formula. Expressions the
/// grammar cannot handle (arithmetic, comparisons, function-like macros)
/// degrade to TrueConst with a recorded warning.
Formula parse_cpp_condition(const std::string &text, DirectiveKind kind, const MacroTable &macros,
                            const std::regex &var_regex, Diagnostics &diag);

SourceFileBlocks extract_blocks(const std::string &file_text, const std::string &path,
                                const ExtractOptions &options, Diagnostics &diag);

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Extracts every file under root whose relative path matches
/// options.file_regex, in deterministic path order. Per-file failures
/// become warnings; a missing root or an expired deadline aborts.
std::vector<SourceFileBlocks> scan_source_tree(const std::filesystem::path &root,
                                               const ExtractOptions &options, Diagnostics &diag,
                                               Deadline deadline = {});

std::set<std::string> collect_code_variables(const std::vector<SourceFileBlocks> &files);

} // namespace varex
