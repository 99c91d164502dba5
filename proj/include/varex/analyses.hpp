#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "varex/build_model.hpp"
#include "varex/code_model.hpp"
#include "varex/diagnostics.hpp"
#include "varex/result_table.hpp"
#include "varex/variability_model.hpp"

namespace varex {

struct DeadBlockFinding {
    std::string path;
    int start_line = 0;
    int end_line = 0;
    Formula block_pc;
    Formula file_pc;
    enum class Category { ContradictionInCode, DeadUnderVm } category;
};

struct FeatureEffectEntry {
    std::string feature;
    Formula effect_condition;
};

/// feature -> distinct simplified presence conditions it occurs in.
using PcMap = std::map<std::string, std::set<Formula, FormulaLess>>;

/// Blocks whose VM && file PC && block PC is unsatisfiable. Rows ordered
/// by (path, start line).
std::vector<DeadBlockFinding> find_dead_blocks(const std::vector<SourceFileBlocks> &code,
                                               const BuildModel &build,
                                               const VariabilityModel &vm, Diagnostics &diag);
ResultTable undead_analysis(const std::vector<SourceFileBlocks> &code, const BuildModel &build,
                            const VariabilityModel &vm, Diagnostics &diag);

/// Variables matching the variability regex that occur in code or build
/// PCs but are absent from the variability model.
ResultTable missing_features(const std::vector<SourceFileBlocks> &code, const BuildModel &build,
                             const VariabilityModel &vm, const std::string &variable_regex,
                             Diagnostics &diag);

PcMap pc_finder(const std::vector<SourceFileBlocks> &code, const BuildModel *build,
                Diagnostics &diag, bool conjoin_build_pc = true);

/// FE(v) = simplified disjunction over v's presence conditions of
/// XOR(pc[v:=true], pc[v:=false]); never mentions v itself.
std::vector<FeatureEffectEntry> feature_effect(const PcMap &pcs);

/// Keeps entries whose feature is in the variability model; identity when
/// no model is configured.
std::vector<FeatureEffectEntry> filter_relevant(std::vector<FeatureEffectEntry> entries,
                                                const VariabilityModel *vm);

/// Features the model permits selecting in a configuration where they
/// have no effect: sat(VM && v && !FE(v)), with a deterministic witness.
ResultTable configuration_mismatches(const std::vector<FeatureEffectEntry> &fes,
                                     const VariabilityModel &vm);

/// Per-file DLoC, LoF and PLoF = 100 * LoF / DLoC.
ResultTable metrics_per_file(const std::vector<SourceFileBlocks> &code,
                             const std::string &variable_regex);

ResultTable pc_map_table(const PcMap &pcs);
ResultTable feature_effect_table(const std::vector<FeatureEffectEntry> &entries);

} // namespace varex
