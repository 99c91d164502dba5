#pragma once

#include <string>

#include "varex/formula.hpp"

namespace varex {

/// Surface syntax: identifiers, true, false, !, &&, ||, parentheses.
/// parse_formula(to_string(f)) == f structurally for every formula.
std::string to_string(const Formula &f);
Formula parse_formula(const std::string &text);

} // namespace varex
