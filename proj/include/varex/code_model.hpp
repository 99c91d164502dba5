#pragma once

#include <string>
#include <vector>

#include "varex/formula.hpp"

namespace varex {

enum class LineClass { Code, Blank, Comment, Directive };

/// One conditional compilation region. presence_condition is built
/// structurally as parent PC && branch exclusion && condition.
struct CodeBlock {
    Formula condition;
    Formula presence_condition;
    int start_line = 0; // 1-based, the directive line
    int end_line = 0;   // 1-based, line before the closing directive
    std::vector<CodeBlock> children;
};

struct SourceFileBlocks {
    std::string path; // repository-relative
    int line_count = 0;
    std::vector<LineClass> line_classes; // size line_count
    std::vector<CodeBlock> top_blocks;
};

/// Innermost presence condition per line (index 0 = line 1); lines
/// outside every block get TrueConst.
std::vector<Formula> line_presence_conditions(const SourceFileBlocks &file);

} // namespace varex
