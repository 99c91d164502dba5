#include "varex/formula.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "varex/cnf.hpp"
#include "varex/errors.hpp"

namespace varex {

namespace {
Formula shallow_not(Formula operand) {
    if (operand.is_true())
        return Formula::false_const();
    if (operand.is_false())
        return Formula::true_const();
    return Formula::negation(std::move(operand));
}
} // namespace

Formula Formula::true_const() {
    static const Formula f{std::make_shared<const Node>(Node{Kind::True, "", {}})};
    return f;
}

Formula Formula::false_const() {
    static const Formula f{std::make_shared<const Node>(Node{Kind::False, "", {}})};
    return f;
}

Formula Formula::var(std::string name) {
    if (name.empty())
        throw std::invalid_argument("variable name must be non-empty");
    for (char c : name)
        if (std::isspace(static_cast<unsigned char>(c)))
            throw std::invalid_argument("variable name must not contain whitespace: " + name);
    return Formula{std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}})};
}

Formula Formula::negation(Formula operand) {
    return Formula{std::make_shared<const Node>(Node{Kind::Not, "", {std::move(operand)}})};
}

Formula Formula::conjunction(std::vector<Formula> operands) {
    if (operands.empty())
        return true_const();
    if (operands.size() == 1)
        return operands[0];
    return Formula{std::make_shared<const Node>(Node{Kind::And, "", std::move(operands)})};
}

Formula Formula::disjunction(std::vector<Formula> operands) {
    if (operands.empty())
        return false_const();
    if (operands.size() == 1)
        return operands[0];
    return Formula{std::make_shared<const Node>(Node{Kind::Or, "", std::move(operands)})};
}

int Formula::compare(const Formula &a, const Formula &b) {
    if (a.node_ == b.node_)
        return 0;
    if (a.kind() != b.kind())
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
    case Kind::True:
    case Kind::False:
        return 0;
    case Kind::Var:
        return a.name().compare(b.name());
    default: {
        const auto &oa = a.operands();
        const auto &ob = b.operands();
        if (oa.size() != ob.size())
            return oa.size() < ob.size() ? -1 : 1;
        for (std::size_t i = 0; i < oa.size(); ++i)
            if (int c = compare(oa[i], ob[i]); c != 0)
                return c;
        return 0;
    }
    }
}

bool Formula::operator==(const Formula &other) const { return compare(*this, other) == 0; }

bool evaluate(const Formula &f, const Assignment &a) {
    switch (f.kind()) {
    case Formula::Kind::True:
        return true;
    case Formula::Kind::False:
        return false;
    case Formula::Kind::Var: {
        auto it = a.find(f.name());
        if (it == a.end())
            throw UnassignedVariable(f.name());
        return it->second;
    }
    case Formula::Kind::Not:
        return !evaluate(f.operand(), a);
    case Formula::Kind::And:
        for (const auto &op : f.operands())
            if (!evaluate(op, a))
                return false;
        return true;
    case Formula::Kind::Or:
        for (const auto &op : f.operands())
            if (evaluate(op, a))
                return true;
        return false;
    }
    return false; // unreachable
}

Formula substitute(const Formula &f, const std::string &variable, bool value) {
    switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
        return f;
    case Formula::Kind::Var:
        if (f.name() == variable)
            return value ? Formula::true_const() : Formula::false_const();
        return f;
    case Formula::Kind::Not:
        return shallow_not(substitute(f.operand(), variable, value));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> ops;
        ops.reserve(f.operands().size());
        bool changed = false;
        for (const auto &op : f.operands()) {
            Formula s = substitute(op, variable, value);
            changed = changed || !(s == op);
            ops.push_back(std::move(s));
        }
        if (!changed)
            return f;
        Formula raw = f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(ops))
                                                     : Formula::disjunction(std::move(ops));
        return simplify(raw);
    }
    }
    return f;
}

Formula simplify(const Formula &f) {
    switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Var:
        return f;
    case Formula::Kind::Not: {
        Formula op = simplify(f.operand());
        if (op.is_true())
            return Formula::false_const();
        if (op.is_false())
            return Formula::true_const();
        if (op.kind() == Formula::Kind::Not)
            return op.operand();
        return Formula::negation(std::move(op));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const bool is_and = f.kind() == Formula::Kind::And;
        const Formula absorbing = is_and ? Formula::false_const() : Formula::true_const();
        const Formula neutral = is_and ? Formula::true_const() : Formula::false_const();
        std::vector<Formula> ops;
        for (const auto &raw : f.operands()) {
            Formula op = simplify(raw);
            if (op == absorbing)
                return absorbing;
            if (op == neutral)
                continue;
            bool dup = false;
            for (const auto &seen : ops)
                if (seen == op) {
                    dup = true;
                    break;
                }
            if (!dup)
                ops.push_back(std::move(op));
        }
        return is_and ? Formula::conjunction(std::move(ops))
                      : Formula::disjunction(std::move(ops));
    }
    }
    return f;
}

Formula make_xor(const Formula &x, const Formula &y) {
    return Formula::disjunction({Formula::conjunction({x, Formula::negation(y)}),
                                 Formula::conjunction({Formula::negation(x), y})});
}

namespace {
void collect_vars(const Formula &f, std::set<std::string> &out) {
    switch (f.kind()) {
    case Formula::Kind::Var:
        out.insert(f.name());
        break;
    case Formula::Kind::Not:
        collect_vars(f.operand(), out);
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
        for (const auto &op : f.operands())
            collect_vars(op, out);
        break;
    default:
        break;
    }
}
} // namespace

std::set<std::string> variables(const Formula &f) {
    std::set<std::string> out;
    collect_vars(f, out);
    return out;
}

std::vector<Assignment> enumerate_models(const Formula &f, const std::vector<std::string> &vars) {
    if (vars.size() > 24)
        throw TooManyVariables(vars.size());
    std::vector<Assignment> models;
    const std::size_t n = vars.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        Assignment a;
        for (std::size_t i = 0; i < n; ++i) {
            // vars[0] is the most significant position so models come out
            // in lexicographic order of the variable list, false < true
            bool value = (bits >> (n - 1 - i)) & 1;
            a[vars[i]] = value;
        }
        if (evaluate(f, a))
            models.push_back(std::move(a));
    }
    return models;
}

bool is_satisfiable(const Formula &f) { return dpll_sat(to_cnf(f)); }

std::optional<Assignment> sat_witness(const Formula &f) {
    CnfFormula cnf = to_cnf(f);
    auto model = dpll_model(cnf);
    if (!model)
        return std::nullopt;
    Assignment a;
    for (std::size_t i = 0; i < cnf.names.size(); ++i)
        a[cnf.names[i]] = (*model)[i];
    return a;
}

bool equivalent(const Formula &f, const Formula &g) {
    if (f == g)
        return true;
    return !is_satisfiable(make_xor(f, g));
}

} // namespace varex
