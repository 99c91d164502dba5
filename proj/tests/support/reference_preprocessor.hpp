#pragma once

#include <set>
#include <string>

#include "varex/formula.hpp"

namespace varex::testing {

/// Independent brute-force branch elimination: evaluates the conditional
/// structure of a C file directly against one configuration and returns
/// the 1-based numbers of the retained non-directive lines. Deliberately
/// shares no code with the block extractor.
std::set<int> reference_retained_lines(const std::string &file_text, const Assignment &config,
                                       bool handle_macros);

} // namespace varex::testing
