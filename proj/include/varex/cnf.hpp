#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varex/formula.hpp"

namespace varex {

/// CNF clause set over integer literals. Variables 1..names.size() are
/// the original formula variables (names[i] maps to id i+1); the next
/// aux_count ids are Tseitin auxiliaries.
struct CnfFormula {
    std::vector<std::string> names;
    int aux_count = 0;
    std::vector<std::vector<int>> clauses;

    int variable_count() const { return static_cast<int>(names.size()) + aux_count; }
};

/// Tseitin-style transformation: equisatisfiable, clause count linear in
/// formula size. Clauses are deduplicated per-literal and tautological
/// clauses dropped.
CnfFormula to_cnf(const Formula &f);

bool dpll_sat(const CnfFormula &cnf);

/// Satisfying model as values for variables 1..variable_count (index 0 =
/// variable 1), or nullopt. Unconstrained variables are set to false so
/// the result is deterministic.
std::optional<std::vector<bool>> dpll_model(const CnfFormula &cnf);

} // namespace varex
