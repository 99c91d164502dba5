#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "varex/build_model.hpp"
#include "varex/code_model.hpp"
#include "varex/diagnostics.hpp"
#include "varex/variability_model.hpp"

namespace varex {

/// Models are cached under cache_dir/{code,build,vm}/<input hash>.<ext>,
/// keyed by a hash of the extractor's inputs. A read only hits when a
/// file for the exact input hash exists; corrupt entries are treated as
/// absent with a warning.

void cache_write_code(const std::vector<SourceFileBlocks> &model,
                      const std::filesystem::path &cache_dir, const std::string &input_hash);
std::optional<std::vector<SourceFileBlocks>> cache_read_code(const std::filesystem::path &cache_dir,
                                                             const std::string &input_hash,
                                                             Diagnostics &diag);

void cache_write_build(const BuildModel &model, const std::filesystem::path &cache_dir,
                       const std::string &input_hash);
std::optional<BuildModel> cache_read_build(const std::filesystem::path &cache_dir,
                                           const std::string &input_hash, Diagnostics &diag);

void cache_write_vm(const VariabilityModel &model, const std::filesystem::path &cache_dir,
                    const std::string &input_hash);
std::optional<VariabilityModel> cache_read_vm(const std::filesystem::path &cache_dir,
                                              const std::string &input_hash, Diagnostics &diag);

} // namespace varex
