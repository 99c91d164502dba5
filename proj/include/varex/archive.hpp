#pragma once

#include <filesystem>

#include "varex/pipeline.hpp"

namespace varex {

/// Packs config, manifest, outputs, logs and (optionally) the inputs of
/// a completed run into one zip under dest_dir.
std::filesystem::path create_archive(const RunManifest &manifest, const ExperimentConfig &config,
                                     const std::filesystem::path &dest_dir, bool include_inputs);

/// Extracts an archive into a fresh workspace, rewrites the path keys,
/// re-executes the experiment and verifies the output hashes against the
/// archived manifest. Throws ReproductionMismatch on any difference.
RunManifest rerun_archive(const std::filesystem::path &archive_path);

} // namespace varex
