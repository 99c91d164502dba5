#include "varex/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace varex {

namespace {

class TseitinEncoder {
public:
    explicit TseitinEncoder(CnfFormula &out) : out_(out) {}

    int fresh_var() {
        ++out_.aux_count;
        return static_cast<int>(out_.names.size()) + out_.aux_count;
    }

    // Literal representing constant true; materialized on first use.
    int true_literal() {
        if (true_lit_ == 0) {
            true_lit_ = fresh_var();
            add_clause({true_lit_});
        }
        return true_lit_;
    }

    void add_clause(std::vector<int> lits) {
        std::sort(lits.begin(), lits.end(),
                  [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if (lits[i] == -lits[i + 1])
                return; // tautology
        out_.clauses.push_back(std::move(lits));
    }

    int encode(const Formula &f, const std::map<std::string, int> &ids) {
        switch (f.kind()) {
        case Formula::Kind::True:
            return true_literal();
        case Formula::Kind::False:
            return -true_literal();
        case Formula::Kind::Var:
            return ids.at(f.name());
        case Formula::Kind::Not:
            return -encode(f.operand(), ids);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<int> parts;
            parts.reserve(f.operands().size());
            for (const auto &op : f.operands())
                parts.push_back(encode(op, ids));
            const int v = fresh_var();
            if (f.kind() == Formula::Kind::And) {
                std::vector<int> big{v};
                for (int p : parts) {
                    add_clause({-v, p});
                    big.push_back(-p);
                }
                add_clause(std::move(big));
            } else {
                std::vector<int> big{-v};
                for (int p : parts) {
                    add_clause({v, -p});
                    big.push_back(p);
                }
                add_clause(std::move(big));
            }
            return v;
        }
        }
        return true_literal(); // unreachable
    }

private:
    CnfFormula &out_;
    int true_lit_ = 0;
};

} // namespace

CnfFormula to_cnf(const Formula &f) {
    CnfFormula cnf;
    for (const auto &name : variables(f))
        cnf.names.push_back(name);
    std::map<std::string, int> ids;
    for (std::size_t i = 0; i < cnf.names.size(); ++i)
        ids[cnf.names[i]] = static_cast<int>(i) + 1;
    TseitinEncoder enc(cnf);
    enc.add_clause({enc.encode(f, ids)});
    return cnf;
}

namespace {

// 0 = unassigned, 1 = true, -1 = false
using Trail = std::vector<int>;

int lit_value(const Trail &t, int lit) {
    int v = t[static_cast<std::size_t>(std::abs(lit))];
    return lit > 0 ? v : -v;
}

// Returns false on conflict.
bool unit_propagate(const CnfFormula &cnf, Trail &t) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto &clause : cnf.clauses) {
            int unassigned = 0;
            int last_free = 0;
            bool satisfied = false;
            for (int lit : clause) {
                int v = lit_value(t, lit);
                if (v > 0) {
                    satisfied = true;
                    break;
                }
                if (v == 0) {
                    ++unassigned;
                    last_free = lit;
                }
            }
            if (satisfied)
                continue;
            if (unassigned == 0)
                return false;
            if (unassigned == 1) {
                t[static_cast<std::size_t>(std::abs(last_free))] = last_free > 0 ? 1 : -1;
                changed = true;
            }
        }
    }
    return true;
}

void pure_literal_eliminate(const CnfFormula &cnf, Trail &t) {
    const std::size_t n = t.size();
    std::vector<char> pos(n, 0), neg(n, 0);
    for (const auto &clause : cnf.clauses) {
        bool satisfied = false;
        for (int lit : clause)
            if (lit_value(t, lit) > 0) {
                satisfied = true;
                break;
            }
        if (satisfied)
            continue;
        for (int lit : clause) {
            if (lit_value(t, lit) != 0)
                continue;
            (lit > 0 ? pos : neg)[static_cast<std::size_t>(std::abs(lit))] = 1;
        }
    }
    for (std::size_t v = 1; v < n; ++v) {
        if (t[v] != 0)
            continue;
        if (pos[v] && !neg[v])
            t[v] = 1;
        else if (neg[v] && !pos[v])
            t[v] = -1;
    }
}

bool dpll(const CnfFormula &cnf, Trail t, Trail *model) {
    if (!unit_propagate(cnf, t))
        return false;
    pure_literal_eliminate(cnf, t);
    // lowest-numbered unassigned variable, for reproducible witnesses
    int branch = 0;
    for (std::size_t v = 1; v < t.size(); ++v)
        if (t[v] == 0) {
            branch = static_cast<int>(v);
            break;
        }
    if (branch == 0) {
        bool all_satisfied = true;
        for (const auto &clause : cnf.clauses) {
            bool satisfied = false;
            for (int lit : clause)
                if (lit_value(t, lit) > 0) {
                    satisfied = true;
                    break;
                }
            if (!satisfied) {
                all_satisfied = false;
                break;
            }
        }
        if (all_satisfied && model)
            *model = t;
        return all_satisfied;
    }
    for (int value : {-1, 1}) {
        Trail branched = t;
        branched[static_cast<std::size_t>(branch)] = value;
        if (dpll(cnf, std::move(branched), model))
            return true;
    }
    return false;
}

} // namespace

bool dpll_sat(const CnfFormula &cnf) {
    Trail t(static_cast<std::size_t>(cnf.variable_count()) + 1, 0);
    return dpll(cnf, std::move(t), nullptr);
}

std::optional<std::vector<bool>> dpll_model(const CnfFormula &cnf) {
    Trail t(static_cast<std::size_t>(cnf.variable_count()) + 1, 0);
    Trail model;
    if (!dpll(cnf, std::move(t), &model))
        return std::nullopt;
    std::vector<bool> out;
    out.reserve(static_cast<std::size_t>(cnf.variable_count()));
    for (int v = 1; v <= cnf.variable_count(); ++v)
        out.push_back(model[static_cast<std::size_t>(v)] > 0);
    return out;
}

} // namespace varex
