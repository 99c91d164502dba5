#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support/fixture_corpus.hpp"
#include "support/reference_preprocessor.hpp"
#include "varex/block_extractor.hpp"
#include "varex/errors.hpp"
#include "varex/formula_text.hpp"

using namespace varex;
namespace fs = std::filesystem;

namespace {

const std::regex kDefaultVarRegex("^CONFIG_\\w+$");

Formula cond(const std::string &text, DirectiveKind kind, const MacroTable &macros = {}) {
    Diagnostics diag;
    return parse_cpp_condition(text, kind, macros, kDefaultVarRegex, diag);
}

fs::path make_temp_dir(const std::string &tag) {
    fs::path dir = fs::temp_directory_path() / ("varex_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path &path, const std::string &content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("parse_cpp_condition grammar") {
    CHECK(cond("defined(CONFIG_A) && !defined(CONFIG_B)", DirectiveKind::If) ==
          Formula::conjunction({Formula::var("CONFIG_A"),
                                Formula::negation(Formula::var("CONFIG_B"))}));
    CHECK(cond("CONFIG_X", DirectiveKind::Ifdef) == Formula::var("CONFIG_X"));
    CHECK(cond("CONFIG_X", DirectiveKind::Ifndef) ==
          Formula::negation(Formula::var("CONFIG_X")));
    CHECK(cond("defined CONFIG_A || defined(CONFIG_B)", DirectiveKind::If) ==
          Formula::disjunction({Formula::var("CONFIG_A"), Formula::var("CONFIG_B")}));
    CHECK(cond("1", DirectiveKind::If) == Formula::true_const());
    CHECK(cond("0", DirectiveKind::If) == Formula::false_const());
    CHECK(cond("CONFIG_BARE", DirectiveKind::If) == Formula::var("CONFIG_BARE"));
    CHECK(cond("(defined(CONFIG_A))", DirectiveKind::If) == Formula::var("CONFIG_A"));
}

TEST_CASE("unparsable conditions degrade to true with a warning") {
    Diagnostics diag;
    CHECK(parse_cpp_condition("FOO(1,2) + 3", DirectiveKind::If, {}, kDefaultVarRegex, diag) ==
          Formula::true_const());
    CHECK_FALSE(diag.empty());

    Diagnostics diag2;
    CHECK(parse_cpp_condition("CONFIG_X == 2", DirectiveKind::If, {}, kDefaultVarRegex, diag2) ==
          Formula::true_const());
    CHECK_FALSE(diag2.empty());

    Diagnostics diag3;
    CHECK(parse_cpp_condition("VERSION > 3", DirectiveKind::Elif, {}, kDefaultVarRegex, diag3) ==
          Formula::true_const());
    CHECK_FALSE(diag3.empty());
}

TEST_CASE("macro table folds identifiers to constants") {
    MacroTable macros{{"CONFIG_X", true}, {"CONFIG_Y", false}};
    CHECK(cond("CONFIG_X", DirectiveKind::Ifdef, macros) == Formula::true_const());
    CHECK(cond("CONFIG_Y", DirectiveKind::Ifdef, macros) == Formula::false_const());
    CHECK(cond("CONFIG_X", DirectiveKind::Ifndef, macros) == Formula::false_const());
    CHECK(cond("defined(CONFIG_Y) || defined(CONFIG_Z)", DirectiveKind::If, macros) ==
          Formula::var("CONFIG_Z"));
}

TEST_CASE("if/elif/else chain presence conditions") {
    const std::string text = "#if defined(A)\nx;\n#elif defined(B)\ny;\n#else\nz;\n#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "chain.c", {}, diag);
    REQUIRE(file.top_blocks.size() == 3);
    const Formula a = Formula::var("A");
    const Formula b = Formula::var("B");
    CHECK(equivalent(file.top_blocks[0].presence_condition, a));
    CHECK(equivalent(file.top_blocks[1].presence_condition,
                     Formula::conjunction({Formula::negation(a), b})));
    CHECK(equivalent(file.top_blocks[2].presence_condition,
                     Formula::conjunction({Formula::negation(a), Formula::negation(b)})));
    // structural form: parent PC && branch exclusion && condition
    CHECK(file.top_blocks[1].presence_condition ==
          Formula::conjunction({Formula::true_const(), Formula::negation(a), b}));
    CHECK(file.top_blocks[0].start_line == 1);
    CHECK(file.top_blocks[0].end_line == 2);
    CHECK(file.top_blocks[1].start_line == 3);
    CHECK(file.top_blocks[1].end_line == 4);
    CHECK(file.top_blocks[2].start_line == 5);
    CHECK(file.top_blocks[2].end_line == 6);
}

TEST_CASE("nesting conjoins presence conditions") {
    const std::string text = "#ifdef A\n#ifdef B\nx;\n#endif\n#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "nest.c", {}, diag);
    REQUIRE(file.top_blocks.size() == 1);
    REQUIRE(file.top_blocks[0].children.size() == 1);
    CHECK(equivalent(file.top_blocks[0].presence_condition, Formula::var("A")));
    CHECK(equivalent(file.top_blocks[0].children[0].presence_condition,
                     Formula::conjunction({Formula::var("A"), Formula::var("B")})));
}

TEST_CASE("sibling chain blocks are pairwise contradictory and cover the parent") {
    const std::string text =
        "#ifdef P\n#if defined(A)\nx;\n#elif defined(B)\ny;\n#else\nz;\n#endif\n#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "cover.c", {}, diag);
    REQUIRE(file.top_blocks.size() == 1);
    const auto &chain = file.top_blocks[0].children;
    REQUIRE(chain.size() == 3);
    std::vector<Formula> pcs;
    for (const auto &b : chain) {
        pcs.push_back(b.presence_condition);
        // every child implies its parent
        CHECK_FALSE(is_satisfiable(Formula::conjunction(
            {b.presence_condition, Formula::negation(file.top_blocks[0].presence_condition)})));
    }
    for (std::size_t i = 0; i < pcs.size(); ++i)
        for (std::size_t j = i + 1; j < pcs.size(); ++j)
            CHECK_FALSE(is_satisfiable(Formula::conjunction({pcs[i], pcs[j]})));
    CHECK(equivalent(Formula::disjunction(pcs), file.top_blocks[0].presence_condition));
}

TEST_CASE("unbalanced directives") {
    Diagnostics diag;
    CHECK_THROWS_AS(extract_blocks("#endif\n", "u.c", {}, diag), UnbalancedDirectives);
    CHECK_THROWS_AS(extract_blocks("#else\nx;\n", "u.c", {}, diag), UnbalancedDirectives);
    CHECK_THROWS_AS(extract_blocks("#ifdef A\nx;\n", "u.c", {}, diag), UnbalancedDirectives);
    CHECK_THROWS_AS(extract_blocks("#ifdef A\n#else\n#elif B\n#endif\n", "u.c", {}, diag),
                    UnbalancedDirectives);
}

TEST_CASE("line classification") {
    const std::string text = "int a;\n"
                             "\n"
                             "// comment\n"
                             "/* multi\n"
                             "   line */\n"
                             "#ifdef A\n"
                             "int b; /* trailing */\n"
                             "#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "cls.c", {}, diag);
    REQUIRE(file.line_count == 8);
    CHECK(file.line_classes[0] == LineClass::Code);
    CHECK(file.line_classes[1] == LineClass::Blank);
    CHECK(file.line_classes[2] == LineClass::Comment);
    CHECK(file.line_classes[3] == LineClass::Comment);
    CHECK(file.line_classes[4] == LineClass::Comment);
    CHECK(file.line_classes[5] == LineClass::Directive);
    CHECK(file.line_classes[6] == LineClass::Code);
    CHECK(file.line_classes[7] == LineClass::Directive);
}

TEST_CASE("continuation lines join into one directive") {
    const std::string text = "#if defined(CONFIG_A) && \\\n    defined(CONFIG_B)\nx;\n#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "cont.c", {}, diag);
    REQUIRE(file.top_blocks.size() == 1);
    CHECK(equivalent(file.top_blocks[0].condition,
                     Formula::conjunction({Formula::var("CONFIG_A"), Formula::var("CONFIG_B")})));
    CHECK(file.line_classes[1] == LineClass::Directive);
}

TEST_CASE("macro handling folds same-file defines") {
    const std::string text = "#define CONFIG_X 1\n#ifdef CONFIG_X\nx;\n#endif\n"
                             "#undef CONFIG_X\n#ifdef CONFIG_X\ny;\n#endif\n";
    Diagnostics diag;
    ExtractOptions options;
    options.handle_macros = true;
    SourceFileBlocks file = extract_blocks(text, "macro.c", options, diag);
    REQUIRE(file.top_blocks.size() == 2);
    CHECK(file.top_blocks[0].condition == Formula::true_const());
    CHECK(file.top_blocks[1].condition == Formula::false_const());

    // guarded defines are ignored with a warning
    Diagnostics diag2;
    SourceFileBlocks guarded = extract_blocks(
        "#ifdef A\n#define CONFIG_G 1\n#endif\n#ifdef CONFIG_G\nx;\n#endif\n", "g.c", options,
        diag2);
    CHECK(guarded.top_blocks[1].condition == Formula::var("CONFIG_G"));
    CHECK_FALSE(diag2.empty());
}

TEST_CASE("macros disabled leaves identifiers symbolic") {
    const std::string text = "#define CONFIG_X 1\n#ifdef CONFIG_X\nx;\n#endif\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "m.c", {}, diag);
    CHECK(file.top_blocks[0].condition == Formula::var("CONFIG_X"));
}

TEST_CASE("extraction against the reference preprocessor") {
    const std::string text = "int always;\n"
                             "#if defined(CONFIG_A) || defined(CONFIG_B)\n"
                             "int ab;\n"
                             "#ifdef CONFIG_C\n"
                             "int abc;\n"
                             "#endif\n"
                             "#elif defined(CONFIG_C)\n"
                             "int c_only;\n"
                             "#else\n"
                             "int none;\n"
                             "#endif\n"
                             "int tail;\n";
    Diagnostics diag;
    SourceFileBlocks file = extract_blocks(text, "ref.c", {}, diag);
    std::vector<Formula> pcs = line_presence_conditions(file);
    std::vector<std::string> vars = {"CONFIG_A", "CONFIG_B", "CONFIG_C"};
    for (const auto &a : enumerate_models(Formula::true_const(), vars)) {
        std::set<int> retained = varex::testing::reference_retained_lines(text, a, false);
        for (int l = 1; l <= file.line_count; ++l) {
            if (file.line_classes[static_cast<std::size_t>(l - 1)] == LineClass::Directive)
                continue;
            bool included = evaluate(pcs[static_cast<std::size_t>(l - 1)], a);
            CHECK(included == (retained.count(l) > 0));
        }
    }
}

TEST_CASE("synthetic corpus agrees with the reference preprocessor") {
    auto corpus = varex::testing::make_corpus(50, 4, 20240917);
    Diagnostics diag;
    for (const auto &[name, text] : corpus) {
        SourceFileBlocks file = extract_blocks(text, name, {}, diag);
        std::vector<Formula> pcs = line_presence_conditions(file);
        std::set<std::string> var_set = collect_code_variables({file});
        std::vector<std::string> vars(var_set.begin(), var_set.end());
        for (const auto &a : enumerate_models(Formula::true_const(), vars)) {
            std::set<int> retained = varex::testing::reference_retained_lines(text, a, false);
            for (int l = 1; l <= file.line_count; ++l) {
                if (file.line_classes[static_cast<std::size_t>(l - 1)] == LineClass::Directive)
                    continue;
                CHECK(evaluate(pcs[static_cast<std::size_t>(l - 1)], a) ==
                      (retained.count(l) > 0));
            }
        }
    }
}

TEST_CASE("scan_source_tree filters, orders and tolerates bad files") {
    fs::path dir = make_temp_dir("scan");
    write_file(dir / "b.c", "#ifdef CONFIG_B\nint b;\n#endif\n");
    write_file(dir / "a.c", "int a;\n");
    write_file(dir / "sub/c.c", "int c;\n");
    write_file(dir / "skip.h", "#ifdef CONFIG_H\nint h;\n#endif\n");
    write_file(dir / "broken.c", "#endif\n");

    Diagnostics diag;
    auto files = scan_source_tree(dir, {}, diag);
    REQUIRE(files.size() == 3); // broken.c skipped with a warning
    CHECK(files[0].path == "a.c");
    CHECK(files[1].path == "b.c");
    CHECK(files[2].path == "sub/c.c");
    CHECK_FALSE(diag.empty());

    CHECK(scan_source_tree(dir, {".*\\.cpp", "^CONFIG_\\w+$", false}, diag).empty());
    CHECK_THROWS_AS(scan_source_tree(dir / "missing", {}, diag), SourceTreeMissing);
}

TEST_CASE("scan determinism") {
    fs::path dir = make_temp_dir("det");
    for (int i = 0; i < 20; ++i)
        write_file(dir / ("f" + std::to_string(i) + ".c"),
                   "#ifdef CONFIG_V" + std::to_string(i) + "\nint x;\n#endif\n");
    Diagnostics diag;
    auto first = scan_source_tree(dir, {}, diag);
    auto second = scan_source_tree(dir, {}, diag);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].path == second[i].path);
        REQUIRE(first[i].top_blocks.size() == second[i].top_blocks.size());
        CHECK(first[i].top_blocks[0].presence_condition ==
              second[i].top_blocks[0].presence_condition);
    }
}

TEST_CASE("collect_code_variables") {
    Diagnostics diag;
    SourceFileBlocks f1 =
        extract_blocks("#ifdef A\n#ifdef B\nx;\n#endif\n#endif\n", "f1.c", {}, diag);
    SourceFileBlocks f2 = extract_blocks("int y;\n", "f2.c", {}, diag);
    CHECK(collect_code_variables({f1, f2}) == std::set<std::string>{"A", "B"});
    CHECK(collect_code_variables({f2}).empty());
}
