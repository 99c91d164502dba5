#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace varex {

/// Truth assignment over named variables. Evaluation requires totality
/// over the formula's variable set.
using Assignment = std::map<std::string, bool>;

/// Immutable propositional formula over named variables. Cheap to copy
/// (shared structure). And/Or always carry at least two operands; the
/// factory functions collapse smaller operand lists.
class Formula {
public:
    enum class Kind { True, False, Var, Not, And, Or };

    Formula() : Formula(true_const()) {}

    static Formula true_const();
    static Formula false_const();
    static Formula var(std::string name);
    static Formula negation(Formula operand);
    static Formula conjunction(std::vector<Formula> operands);
    static Formula disjunction(std::vector<Formula> operands);

    Kind kind() const { return node_->kind; }
    bool is_true() const { return kind() == Kind::True; }
    bool is_false() const { return kind() == Kind::False; }
    bool is_constant() const { return is_true() || is_false(); }

    const std::string &name() const { return node_->name; }         // Var only
    const Formula &operand() const { return node_->operands[0]; }   // Not only
    const std::vector<Formula> &operands() const { return node_->operands; }

    /// Structural equality.
    bool operator==(const Formula &other) const;
    bool operator!=(const Formula &other) const { return !(*this == other); }

    /// Total structural order, usable as a set/map comparator.
    static int compare(const Formula &a, const Formula &b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Formula> operands;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct FormulaLess {
    bool operator()(const Formula &a, const Formula &b) const {
        return Formula::compare(a, b) < 0;
    }
};

bool evaluate(const Formula &f, const Assignment &a);
Formula substitute(const Formula &f, const std::string &variable, bool value);
Formula simplify(const Formula &f);
Formula make_xor(const Formula &x, const Formula &y); // (x && !y) || (!x && y)

/// All variable names occurring in f, sorted.
std::set<std::string> variables(const Formula &f);

/// Exactly the satisfying assignments over `vars` (which must cover f's
/// variables), in lexicographic order of the variable list with
/// false < true. Capped at 24 variables.
std::vector<Assignment> enumerate_models(const Formula &f, const std::vector<std::string> &vars);

bool is_satisfiable(const Formula &f);

/// A satisfying assignment over f's own variables, or nullopt when
/// unsatisfiable. Deterministic for a given formula.
std::optional<Assignment> sat_witness(const Formula &f);

/// Semantic equivalence, decided via satisfiability of the XOR.
bool equivalent(const Formula &f, const Formula &g);

} // namespace varex
