#pragma once

#include <string>
#include <utility>
#include <vector>

#include "varex/diagnostics.hpp"
#include "varex/formula.hpp"

namespace varex {

/// Feature catalog plus the constraint parsed from DIMACS CNF. The raw
/// clause list is kept so serialization does not need a CNF re-encoding.
struct VariabilityModel {
    std::vector<std::pair<std::string, int>> variables; // (name, dimacs id)
    Formula constraint;
    std::vector<std::vector<int>> clauses;
    std::string source_path;

    bool has_variable(const std::string &name) const;
};

/// DIMACS CNF with optional "c <id> <name>" mapping comments. Ids
/// without a mapping get the synthetic name VAR_<id>. A clause-count
/// mismatch is a warning, not an error.
VariabilityModel parse_dimacs(const std::string &text, const std::string &source_path,
                              Diagnostics &diag);

std::string serialize_dimacs(const VariabilityModel &vm);

} // namespace varex
