#include "varex/analyses.hpp"

#include <algorithm>
#include <functional>
#include <regex>

#include "varex/formula_text.hpp"

namespace varex {

namespace {

Formula file_build_pc(const BuildModel &build, const std::string &path, Diagnostics &diag) {
    auto it = build.presence_conditions.find(path);
    if (it != build.presence_conditions.end())
        return it->second;
    diag.warn("analysis", "no build presence condition for " + path + ", assuming true");
    return Formula::true_const();
}

void walk_blocks(const std::vector<CodeBlock> &blocks,
                 const std::function<void(const CodeBlock &)> &fn) {
    for (const auto &b : blocks) {
        fn(b);
        walk_blocks(b.children, fn);
    }
}

} // namespace

std::vector<DeadBlockFinding> find_dead_blocks(const std::vector<SourceFileBlocks> &code,
                                               const BuildModel &build,
                                               const VariabilityModel &vm, Diagnostics &diag) {
    std::vector<DeadBlockFinding> findings;
    for (const auto &file : code) {
        Formula fpc = file_build_pc(build, file.path, diag);
        walk_blocks(file.top_blocks, [&](const CodeBlock &b) {
            Formula in_code = Formula::conjunction({fpc, b.presence_condition});
            if (!is_satisfiable(in_code)) {
                findings.push_back({file.path, b.start_line, b.end_line, b.presence_condition, fpc,
                                    DeadBlockFinding::Category::ContradictionInCode});
                return;
            }
            if (!is_satisfiable(Formula::conjunction({vm.constraint, in_code})))
                findings.push_back({file.path, b.start_line, b.end_line, b.presence_condition, fpc,
                                    DeadBlockFinding::Category::DeadUnderVm});
        });
    }
    std::sort(findings.begin(), findings.end(), [](const auto &a, const auto &b) {
        return std::tie(a.path, a.start_line) < std::tie(b.path, b.start_line);
    });
    return findings;
}

ResultTable undead_analysis(const std::vector<SourceFileBlocks> &code, const BuildModel &build,
                            const VariabilityModel &vm, Diagnostics &diag) {
    ResultTable table;
    table.name = "dead_blocks";
    table.columns = {"Source", "StartLine", "EndLine", "BlockPC", "FilePC", "Category"};
    for (const auto &f : find_dead_blocks(code, build, vm, diag)) {
        table.add_row({f.path, std::to_string(f.start_line), std::to_string(f.end_line),
                       to_string(simplify(f.block_pc)), to_string(simplify(f.file_pc)),
                       f.category == DeadBlockFinding::Category::ContradictionInCode
                           ? std::string("contradiction-in-code")
                           : std::string("dead-under-vm")});
    }
    return table;
}

ResultTable missing_features(const std::vector<SourceFileBlocks> &code, const BuildModel &build,
                             const VariabilityModel &vm, const std::string &variable_regex,
                             Diagnostics &diag) {
    (void)diag;
    const std::regex var_re(variable_regex);
    // first occurrence location per unknown variable
    std::map<std::string, std::string> found;
    for (const auto &file : code) {
        walk_blocks(file.top_blocks, [&](const CodeBlock &b) {
            for (const auto &v : variables(b.condition))
                found.try_emplace(v, file.path + ":" + std::to_string(b.start_line));
        });
    }
    for (const auto &[path, pc] : build.presence_conditions)
        for (const auto &v : variables(pc))
            found.try_emplace(v, "build:" + path);

    ResultTable table;
    table.name = "missing_features";
    table.columns = {"Feature", "Location"};
    for (const auto &[v, loc] : found) {
        if (!std::regex_match(v, var_re))
            continue;
        if (!vm.has_variable(v))
            table.add_row({v, loc});
    }
    return table;
}

PcMap pc_finder(const std::vector<SourceFileBlocks> &code, const BuildModel *build,
                Diagnostics &diag, bool conjoin_build_pc) {
    PcMap pcs;
    for (const auto &file : code) {
        Formula fpc = (build && conjoin_build_pc) ? file_build_pc(*build, file.path, diag)
                                                  : Formula::true_const();
        walk_blocks(file.top_blocks, [&](const CodeBlock &b) {
            Formula pc = simplify(Formula::conjunction({fpc, b.presence_condition}));
            for (const auto &v : variables(pc))
                pcs[v].insert(pc);
        });
    }
    return pcs;
}

std::vector<FeatureEffectEntry> feature_effect(const PcMap &pcs) {
    std::vector<FeatureEffectEntry> entries;
    for (const auto &[feature, conditions] : pcs) {
        std::vector<Formula> terms;
        terms.reserve(conditions.size());
        for (const auto &pc : conditions)
            terms.push_back(make_xor(substitute(pc, feature, true), substitute(pc, feature, false)));
        entries.push_back({feature, simplify(Formula::disjunction(std::move(terms)))});
    }
    // map iteration is already sorted by feature name
    return entries;
}

std::vector<FeatureEffectEntry> filter_relevant(std::vector<FeatureEffectEntry> entries,
                                                const VariabilityModel *vm) {
    if (!vm)
        return entries;
    std::erase_if(entries, [&](const FeatureEffectEntry &e) { return !vm->has_variable(e.feature); });
    return entries;
}

ResultTable configuration_mismatches(const std::vector<FeatureEffectEntry> &fes,
                                     const VariabilityModel &vm) {
    ResultTable table;
    table.name = "configuration_mismatches";
    table.columns = {"Feature", "EffectCondition", "Witness"};
    for (const auto &entry : fes) {
        Formula test = Formula::conjunction(
            {vm.constraint, Formula::var(entry.feature), Formula::negation(entry.effect_condition)});
        auto witness = sat_witness(test);
        if (!witness)
            continue;
        std::string w;
        for (const auto &[v, value] : *witness) {
            if (!w.empty())
                w += ' ';
            w += v + "=" + (value ? "true" : "false");
        }
        table.add_row({entry.feature, to_string(simplify(entry.effect_condition)), w});
    }
    return table;
}

ResultTable metrics_per_file(const std::vector<SourceFileBlocks> &code,
                             const std::string &variable_regex) {
    const std::regex var_re(variable_regex);
    ResultTable table;
    table.name = "metrics";
    table.columns = {"Source", "DLoC", "LoF", "PLoF"};
    for (const auto &file : code) {
        std::vector<Formula> pcs = line_presence_conditions(file);
        long dloc = 0, lof = 0;
        for (int l = 0; l < file.line_count; ++l) {
            if (file.line_classes[static_cast<std::size_t>(l)] != LineClass::Code)
                continue;
            ++dloc;
            Formula pc = simplify(pcs[static_cast<std::size_t>(l)]);
            if (pc.is_true())
                continue;
            bool variational = false;
            for (const auto &v : variables(pc))
                if (std::regex_match(v, var_re)) {
                    variational = true;
                    break;
                }
            if (variational)
                ++lof;
        }
        double plof = dloc == 0 ? 0.0 : 100.0 * static_cast<double>(lof) / static_cast<double>(dloc);
        table.add_row({file.path, static_cast<double>(dloc), static_cast<double>(lof), plof});
    }
    return table;
}

ResultTable pc_map_table(const PcMap &pcs) {
    ResultTable table;
    table.name = "presence_conditions";
    table.columns = {"Feature", "PresenceCondition"};
    for (const auto &[feature, conditions] : pcs)
        for (const auto &pc : conditions)
            table.add_row({feature, to_string(pc)});
    return table;
}

ResultTable feature_effect_table(const std::vector<FeatureEffectEntry> &entries) {
    ResultTable table;
    table.name = "feature_effects";
    table.columns = {"Feature", "EffectCondition"};
    for (const auto &entry : entries)
        table.add_row({entry.feature, to_string(simplify(entry.effect_condition))});
    return table;
}

} // namespace varex
