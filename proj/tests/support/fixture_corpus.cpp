#include "fixture_corpus.hpp"

#include <fstream>
#include <random>

namespace varex::testing {

namespace {

struct Generator {
    std::mt19937 rng;
    std::vector<std::string> vars;
    int next_stmt = 0;

    std::string var() {
        std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
        return vars[pick(rng)];
    }

    std::string condition() {
        std::uniform_int_distribution<int> pick(0, 6);
        switch (pick(rng)) {
        case 0:
            return "defined(" + var() + ")";
        case 1:
            return "defined " + var();
        case 2:
            return "!defined(" + var() + ")";
        case 3:
            return "defined(" + var() + ") && defined(" + var() + ")";
        case 4:
            return "defined(" + var() + ") || !defined(" + var() + ")";
        case 5:
            return var(); // bare identifier, acts as a defined-test
        default:
            return "(defined(" + var() + ") || defined(" + var() + ")) && !defined(" + var() + ")";
        }
    }

    void code_lines(std::string &out, int count) {
        for (int i = 0; i < count; ++i)
            out += "int stmt_" + std::to_string(next_stmt++) + ";\n";
    }

    void block(std::string &out, int depth) {
        std::uniform_int_distribution<int> n_lines(1, 3);
        code_lines(out, n_lines(rng));
        if (depth <= 0)
            return;
        std::uniform_int_distribution<int> shape(0, 4);
        int s = shape(rng);
        if (s == 0)
            return; // no conditional at this level
        std::uniform_int_distribution<int> kind(0, 2);
        switch (kind(rng)) {
        case 0:
            out += "#ifdef " + var() + "\n";
            break;
        case 1:
            out += "#ifndef " + var() + "\n";
            break;
        default:
            out += "#if " + condition() + "\n";
            break;
        }
        block(out, depth - 1);
        if (s >= 3) {
            out += "#elif " + condition() + "\n";
            block(out, depth - 1);
        }
        if (s >= 2) {
            out += "#else\n";
            block(out, depth - 1);
        }
        out += "#endif\n";
        code_lines(out, n_lines(rng));
    }
};

} // namespace

std::vector<std::pair<std::string, std::string>> make_corpus(int count, int max_vars,
                                                             unsigned seed) {
    std::vector<std::pair<std::string, std::string>> corpus;
    std::mt19937 seeder(seed);
    for (int f = 0; f < count; ++f) {
        Generator gen;
        gen.rng.seed(seeder());
        std::uniform_int_distribution<int> n_vars(2, max_vars);
        int v = n_vars(gen.rng);
        for (int i = 0; i < v; ++i)
            gen.vars.push_back("CONFIG_F" + std::to_string(i));
        std::string content = "/* synthetic fixture file */\n";
        std::uniform_int_distribution<int> n_blocks(1, 3);
        int blocks = n_blocks(gen.rng);
        for (int b = 0; b < blocks; ++b)
            gen.block(content, 3);
        corpus.emplace_back("file_" + std::to_string(f) + ".c", std::move(content));
    }
    return corpus;
}

void write_corpus(const std::vector<std::pair<std::string, std::string>> &corpus,
                  const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    for (const auto &[name, content] : corpus) {
        std::ofstream out(dir / name, std::ios::binary);
        out << content;
    }
}

} // namespace varex::testing
