#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace varex::testing {

/// Deterministic synthetic C corpus: `count` files, each using at most
/// `max_vars` CONFIG_ variables, with nested #if/#elif/#else structures.
std::vector<std::pair<std::string, std::string>> make_corpus(int count, int max_vars,
                                                             unsigned seed);

void write_corpus(const std::vector<std::pair<std::string, std::string>> &corpus,
                  const std::filesystem::path &dir);

} // namespace varex::testing
