#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support/fixture_corpus.hpp"
#include "support/random_formula.hpp"
#include "varex/analyses.hpp"
#include "varex/block_extractor.hpp"
#include "varex/formula_text.hpp"

using namespace varex;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = VAREX_FIXTURE_DIR;

SourceFileBlocks file_from(const std::string &text, const std::string &path) {
    Diagnostics diag;
    return extract_blocks(text, path, {}, diag);
}

VariabilityModel vm_from(const std::string &dimacs) {
    Diagnostics diag;
    return parse_dimacs(dimacs, "test.dimacs", diag);
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const Formula A = Formula::var("CONFIG_A");
const Formula B = Formula::var("CONFIG_B");

} // namespace

TEST_CASE("dead block categories") {
    // block 1: A && !A is contradictory on its own
    // block 2: B alone is fine, but the VM forbids B
    SourceFileBlocks f = file_from("#if defined(CONFIG_A) && !defined(CONFIG_A)\nx;\n#endif\n"
                                   "#ifdef CONFIG_B\ny;\n#endif\n"
                                   "#ifdef CONFIG_A\nz;\n#endif\n",
                                   "dead.c");
    VariabilityModel vm = vm_from("c 1 CONFIG_A\nc 2 CONFIG_B\np cnf 2 1\n-2 0\n");
    Diagnostics diag;
    auto findings = find_dead_blocks({f}, BuildModel{}, vm, diag);
    REQUIRE(findings.size() == 2);
    CHECK(findings[0].start_line == 1);
    CHECK(findings[0].category == DeadBlockFinding::Category::ContradictionInCode);
    CHECK(findings[1].start_line == 4);
    CHECK(findings[1].category == DeadBlockFinding::Category::DeadUnderVm);

    ResultTable table = undead_analysis({f}, BuildModel{}, vm, diag);
    CHECK(table.columns == std::vector<std::string>{"Source", "StartLine", "EndLine", "BlockPC",
                                                    "FilePC", "Category"});
    REQUIRE(table.rows.size() == 2);
    CHECK(std::get<std::string>(table.rows[1][5]) == "dead-under-vm");
}

TEST_CASE("dead blocks consider the file's build presence condition") {
    SourceFileBlocks f = file_from("#ifdef CONFIG_B\nx;\n#endif\n", "guarded.c");
    BuildModel bm;
    bm.presence_conditions["guarded.c"] = Formula::negation(B);
    VariabilityModel vm = vm_from("c 1 CONFIG_A\nc 2 CONFIG_B\np cnf 2 0\n");
    Diagnostics diag;
    auto findings = find_dead_blocks({f}, bm, vm, diag);
    REQUIRE(findings.size() == 1);
    // the build PC alone already contradicts the block, no VM involved
    CHECK(findings[0].category == DeadBlockFinding::Category::ContradictionInCode);
}

TEST_CASE("missing features") {
    SourceFileBlocks f =
        file_from("#ifdef CONFIG_KNOWN\nx;\n#endif\n#ifdef CONFIG_GHOST\ny;\n#endif\n"
                  "#ifdef NOT_CONFIG\nz;\n#endif\n",
                  "mf.c");
    BuildModel bm;
    bm.presence_conditions["mf.c"] = Formula::var("CONFIG_BUILD_ONLY");
    VariabilityModel vm = vm_from("c 1 CONFIG_KNOWN\np cnf 1 0\n");
    Diagnostics diag;
    ResultTable table = missing_features({f}, bm, vm, "^CONFIG_\\w+$", diag);
    REQUIRE(table.rows.size() == 2);
    // NOT_CONFIG is filtered by the regex, CONFIG_KNOWN is in the model
    CHECK(std::get<std::string>(table.rows[0][0]) == "CONFIG_BUILD_ONLY");
    CHECK(std::get<std::string>(table.rows[0][1]) == "build:mf.c");
    CHECK(std::get<std::string>(table.rows[1][0]) == "CONFIG_GHOST");
    CHECK(std::get<std::string>(table.rows[1][1]) == "mf.c:4");
}

TEST_CASE("pc_finder collects simplified presence conditions per variable") {
    SourceFileBlocks f = file_from("#ifdef CONFIG_A\n#ifdef CONFIG_B\nx;\n#endif\n#endif\n"
                                   "#ifdef CONFIG_A\ny;\n#endif\n",
                                   "pc.c");
    Diagnostics diag;
    PcMap pcs = pc_finder({f}, nullptr, diag);
    REQUIRE(pcs.count("CONFIG_A") == 1);
    REQUIRE(pcs.count("CONFIG_B") == 1);
    CHECK(pcs.at("CONFIG_A").size() == 2); // A and A && B
    CHECK(pcs.at("CONFIG_B").size() == 1);
    CHECK(pcs.at("CONFIG_B").count(Formula::conjunction({A, B})) == 1);
}

TEST_CASE("pc_finder conjoins the build presence condition when asked") {
    SourceFileBlocks f = file_from("#ifdef CONFIG_B\nx;\n#endif\n", "pcb.c");
    BuildModel bm;
    bm.presence_conditions["pcb.c"] = A;
    Diagnostics diag;
    PcMap with = pc_finder({f}, &bm, diag, true);
    CHECK(with.at("CONFIG_B").count(Formula::conjunction({A, B})) == 1);
    CHECK(with.count("CONFIG_A") == 1); // the build PC contributes its variables
    PcMap without = pc_finder({f}, &bm, diag, false);
    CHECK(without.at("CONFIG_B").count(B) == 1);
}

TEST_CASE("feature effect examples") {
    // pcs(D) = {A && D}  ->  FE(D) == A
    PcMap nested;
    nested["CONFIG_D"] = {Formula::conjunction({A, Formula::var("CONFIG_D")})};
    auto fes = feature_effect(nested);
    REQUIRE(fes.size() == 1);
    CHECK(fes[0].feature == "CONFIG_D");
    CHECK(equivalent(fes[0].effect_condition, A));

    // pcs(V) = {V}  ->  FE(V) == true (always has an effect)
    PcMap solo;
    solo["CONFIG_V"] = {Formula::var("CONFIG_V")};
    fes = feature_effect(solo);
    CHECK(equivalent(fes[0].effect_condition, Formula::true_const()));

    // pcs(V) = {A && V, !A && V}  ->  FE(V) == true
    PcMap split;
    split["CONFIG_V"] = {Formula::conjunction({A, Formula::var("CONFIG_V")}),
                         Formula::conjunction({Formula::negation(A), Formula::var("CONFIG_V")})};
    fes = feature_effect(split);
    CHECK(equivalent(fes[0].effect_condition, Formula::true_const()));
}

TEST_CASE("feature effect never mentions the feature itself") {
    std::mt19937 rng(31);
    auto vars = varex::testing::make_vars("CONFIG_E", 4);
    for (int iter = 0; iter < 100; ++iter) {
        PcMap pcs;
        std::uniform_int_distribution<int> n_pcs(1, 3);
        const std::string &target = vars[0];
        std::set<Formula, FormulaLess> conditions;
        int want = n_pcs(rng);
        while (static_cast<int>(conditions.size()) < want)
            conditions.insert(Formula::conjunction(
                {varex::testing::random_formula(rng, vars, 3), Formula::var(target)}));
        pcs[target] = conditions;
        auto fes = feature_effect(pcs);
        REQUIRE(fes.size() == 1);
        CHECK(variables(fes[0].effect_condition).count(target) == 0);
    }
}

TEST_CASE("feature effect agrees with the definition by enumeration") {
    std::mt19937 rng(37);
    auto vars = varex::testing::make_vars("CONFIG_Q", 4);
    for (int iter = 0; iter < 50; ++iter) {
        const std::string &target = vars[0];
        std::set<Formula, FormulaLess> conditions;
        std::uniform_int_distribution<int> n_pcs(1, 3);
        int want = n_pcs(rng);
        while (static_cast<int>(conditions.size()) < want)
            conditions.insert(varex::testing::random_formula(rng, vars, 3));
        PcMap pcs;
        pcs[target] = conditions;
        Formula fe = feature_effect(pcs)[0].effect_condition;
        std::vector<Formula> parts;
        for (const auto &pc : conditions)
            parts.push_back(make_xor(substitute(pc, target, true), substitute(pc, target, false)));
        CHECK(equivalent(fe, Formula::disjunction(parts)));
    }
}

TEST_CASE("filter_relevant") {
    std::vector<FeatureEffectEntry> entries = {{"CONFIG_IN", Formula::true_const()},
                                               {"CONFIG_OUT", Formula::true_const()}};
    VariabilityModel vm = vm_from("c 1 CONFIG_IN\np cnf 1 0\n");
    auto filtered = filter_relevant(entries, &vm);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].feature == "CONFIG_IN");
    CHECK(filter_relevant(entries, nullptr).size() == 2);
}

TEST_CASE("configuration mismatches") {
    // FE(B) = A: B only matters when A is on. A VM that allows B with A
    // off is a mismatch; the witness must set B=true, A=false.
    std::vector<FeatureEffectEntry> fes = {{"CONFIG_B", A}};
    VariabilityModel permissive = vm_from("c 1 CONFIG_A\nc 2 CONFIG_B\np cnf 2 0\n");
    ResultTable table = configuration_mismatches(fes, permissive);
    REQUIRE(table.rows.size() == 1);
    CHECK(std::get<std::string>(table.rows[0][0]) == "CONFIG_B");
    CHECK(std::get<std::string>(table.rows[0][1]) == "CONFIG_A");
    CHECK(std::get<std::string>(table.rows[0][2]) == "CONFIG_A=false CONFIG_B=true");

    // a VM with B -> A has no mismatch
    VariabilityModel implies = vm_from("c 1 CONFIG_A\nc 2 CONFIG_B\np cnf 2 1\n-2 1 0\n");
    CHECK(configuration_mismatches(fes, implies).rows.empty());
}

TEST_CASE("metrics per file") {
    // 10 code lines, 4 inside CONFIG_ blocks -> PLoF 40.00
    std::string text;
    for (int i = 0; i < 6; ++i)
        text += "int a" + std::to_string(i) + ";\n";
    text += "#ifdef CONFIG_M\n";
    for (int i = 0; i < 4; ++i)
        text += "int b" + std::to_string(i) + ";\n";
    text += "#endif\n";
    ResultTable table = metrics_per_file({file_from(text, "m.c")}, "^CONFIG_\\w+$");
    REQUIRE(table.rows.size() == 1);
    CHECK(std::get<double>(table.rows[0][1]) == doctest::Approx(10));
    CHECK(std::get<double>(table.rows[0][2]) == doctest::Approx(4));
    CHECK(std::get<double>(table.rows[0][3]) == doctest::Approx(40.0));
}

TEST_CASE("metrics edge cases") {
    ResultTable none =
        metrics_per_file({file_from("int a;\nint b;\n", "plain.c")}, "^CONFIG_\\w+$");
    CHECK(std::get<double>(none.rows[0][2]) == doctest::Approx(0));
    CHECK(std::get<double>(none.rows[0][3]) == doctest::Approx(0.0));

    ResultTable full = metrics_per_file(
        {file_from("#ifdef CONFIG_X\nint a;\n#endif\n", "full.c")}, "^CONFIG_\\w+$");
    CHECK(std::get<double>(full.rows[0][3]) == doctest::Approx(100.0));

    // a block over a non-matching variable does not count as LoF
    ResultTable other =
        metrics_per_file({file_from("#ifdef OTHER\nint a;\n#endif\n", "o.c")}, "^CONFIG_\\w+$");
    CHECK(std::get<double>(other.rows[0][2]) == doctest::Approx(0));

    ResultTable empty = metrics_per_file({file_from("", "empty.c")}, "^CONFIG_\\w+$");
    CHECK(std::get<double>(empty.rows[0][1]) == doctest::Approx(0));
    CHECK(std::get<double>(empty.rows[0][3]) == doctest::Approx(0.0));
}

TEST_CASE("metric identities on the synthetic corpus") {
    for (const auto &[name, text] : varex::testing::make_corpus(20, 4, 77)) {
        SourceFileBlocks file = file_from(text, name);
        ResultTable table = metrics_per_file({file}, "^CONFIG_\\w+$");
        double dloc = std::get<double>(table.rows[0][1]);
        double lof = std::get<double>(table.rows[0][2]);
        double plof = std::get<double>(table.rows[0][3]);
        CHECK(lof <= dloc);
        CHECK(plof >= 0.0);
        CHECK(plof <= 100.0);
        if (dloc > 0)
            CHECK(plof == doctest::Approx(100.0 * lof / dloc));
    }
}

TEST_CASE("acpi fixture end to end composition") {
    Diagnostics diag;
    SourceFileBlocks f = extract_blocks(read_file(kFixtures / "acpi/src/acpi.c"), "src/acpi.c",
                                        {}, diag);
    VariabilityModel vm = vm_from(read_file(kFixtures / "acpi/vm.dimacs"));

    PcMap pcs = pc_finder({f}, nullptr, diag);
    auto fes = filter_relevant(feature_effect(pcs), &vm);
    REQUIRE(fes.size() == 2);
    CHECK(fes[0].feature == "CONFIG_ACPI");
    CHECK(equivalent(fes[0].effect_condition, Formula::true_const()));
    CHECK(fes[1].feature == "CONFIG_ACPI_DEBUG");
    CHECK(equivalent(fes[1].effect_condition, Formula::var("CONFIG_ACPI")));

    // the model already enforces DEBUG -> ACPI, so no mismatches
    CHECK(configuration_mismatches(fes, vm).rows.empty());

    // and no dead blocks either
    CHECK(find_dead_blocks({f}, BuildModel{}, vm, diag).empty());
}
