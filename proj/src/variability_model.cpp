#include "varex/variability_model.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "varex/errors.hpp"

namespace varex {

bool VariabilityModel::has_variable(const std::string &name) const {
    for (const auto &[n, id] : variables)
        if (n == name)
            return true;
    return false;
}

VariabilityModel parse_dimacs(const std::string &text, const std::string &source_path,
                              Diagnostics &diag) {
    VariabilityModel vm;
    vm.source_path = source_path;
    vm.constraint = Formula::true_const();

    std::map<int, std::string> names;
    int var_count = -1;
    int clause_count = -1;

    std::istringstream in(text);
    std::string line;
    std::vector<int> pending; // literals of a clause spanning lines
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first == "c") {
            int id;
            std::string name;
            if (std::istringstream cs(line.substr(1)); cs >> id >> name && id > 0)
                names[id] = name;
            continue;
        }
        if (first == "p") {
            std::string fmt;
            if (!(ls >> fmt >> var_count >> clause_count) || fmt != "cnf" || var_count < 0 ||
                clause_count < 0)
                throw MalformedHeader(line);
            continue;
        }
        if (var_count < 0)
            throw MalformedHeader("clause before p line: " + line);
        // literal lines
        std::istringstream nums(line);
        int lit;
        while (nums >> lit) {
            if (lit == 0) {
                if (!pending.empty()) {
                    vm.clauses.push_back(pending);
                    pending.clear();
                }
                continue;
            }
            if (std::abs(lit) > var_count)
                throw LiteralOutOfRange(lit);
            pending.push_back(lit);
        }
        if (!nums.eof())
            throw MalformedHeader("non-numeric clause content: " + line);
    }
    if (!pending.empty())
        throw MissingTerminator();
    if (var_count < 0)
        throw MalformedHeader("missing p line");
    if (clause_count >= 0 && static_cast<int>(vm.clauses.size()) != clause_count)
        diag.warn("vm-extractor", source_path + ": header announces " +
                      std::to_string(clause_count) + " clauses, found " +
                      std::to_string(vm.clauses.size()));

    for (int id = 1; id <= var_count; ++id) {
        auto it = names.find(id);
        vm.variables.emplace_back(it != names.end() ? it->second : "VAR_" + std::to_string(id), id);
    }

    std::vector<Formula> clause_formulas;
    clause_formulas.reserve(vm.clauses.size());
    for (const auto &clause : vm.clauses) {
        std::vector<Formula> lits;
        lits.reserve(clause.size());
        for (int lit : clause) {
            Formula v = Formula::var(vm.variables[static_cast<std::size_t>(std::abs(lit)) - 1].first);
            lits.push_back(lit > 0 ? v : Formula::negation(v));
        }
        clause_formulas.push_back(Formula::disjunction(std::move(lits)));
    }
    vm.constraint = Formula::conjunction(std::move(clause_formulas));
    return vm;
}

std::string serialize_dimacs(const VariabilityModel &vm) {
    std::ostringstream out;
    for (const auto &[name, id] : vm.variables)
        out << "c " << id << ' ' << name << '\n';
    out << "p cnf " << vm.variables.size() << ' ' << vm.clauses.size() << '\n';
    for (const auto &clause : vm.clauses) {
        for (int lit : clause)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

} // namespace varex
