#include <doctest.h>

#include "support/random_formula.hpp"
#include "varex/cnf.hpp"
#include "varex/errors.hpp"
#include "varex/formula.hpp"
#include "varex/formula_text.hpp"

using namespace varex;
using varex::testing::make_vars;
using varex::testing::random_formula;

namespace {
const Formula A = Formula::var("A");
const Formula B = Formula::var("B");
} // namespace

TEST_CASE("construction normalizations") {
    CHECK(Formula::conjunction({}) == Formula::true_const());
    CHECK(Formula::disjunction({}) == Formula::false_const());
    CHECK(Formula::conjunction({A}) == A);
    CHECK(Formula::disjunction({B}) == B);
    CHECK(Formula::conjunction({A, B}).operands().size() == 2);
    CHECK_THROWS_AS(Formula::var(""), std::invalid_argument);
    CHECK_THROWS_AS(Formula::var("has space"), std::invalid_argument);
}

TEST_CASE("evaluate basics") {
    CHECK(evaluate(Formula::conjunction({A, Formula::negation(A)}), {{"A", true}}) == false);
    CHECK(evaluate(Formula::true_const(), {}) == true);
    CHECK(evaluate(Formula::disjunction({A, B}), {{"A", false}, {"B", true}}) == true);
    CHECK_THROWS_AS(evaluate(A, {}), UnassignedVariable);
}

TEST_CASE("substitute") {
    CHECK(substitute(Formula::conjunction({A, B}), "A", true) == B);
    CHECK(substitute(A, "A", false) == Formula::false_const());
    Formula d = Formula::disjunction({A, B});
    CHECK(substitute(d, "C", true) == d);
}

TEST_CASE("simplify local rules") {
    CHECK(simplify(Formula::conjunction({A, Formula::true_const()})) == A);
    CHECK(simplify(Formula::disjunction({A, A, Formula::false_const()})) == A);
    CHECK(simplify(Formula::negation(Formula::negation(B))) == B);
    CHECK(simplify(Formula::conjunction({A, Formula::false_const()})) == Formula::false_const());
    CHECK(simplify(Formula::disjunction({A, Formula::true_const()})) == Formula::true_const());
}

TEST_CASE("enumerate_models") {
    CHECK(enumerate_models(A, {"A"}) == std::vector<Assignment>{{{"A", true}}});
    CHECK(enumerate_models(Formula::true_const(), {"A"}) ==
          std::vector<Assignment>{{{"A", false}}, {{"A", true}}});
    Formula f = Formula::conjunction({Formula::disjunction({A, B}), Formula::negation(A)});
    CHECK(enumerate_models(f, {"A", "B"}) ==
          std::vector<Assignment>{{{"A", false}, {"B", true}}});
    std::vector<std::string> too_many = make_vars("V", 25);
    CHECK_THROWS_AS(enumerate_models(Formula::true_const(), too_many), TooManyVariables);
}

TEST_CASE("to_cnf shapes") {
    CnfFormula single = to_cnf(A);
    CHECK(single.names == std::vector<std::string>{"A"});
    CHECK(single.clauses == std::vector<std::vector<int>>{{1}});

    CnfFormula contradiction = to_cnf(Formula::false_const());
    CHECK_FALSE(dpll_sat(contradiction));
}

TEST_CASE("cnf clauses never contain a literal and its negation") {
    std::mt19937 rng(7);
    auto vars = make_vars("X", 6);
    for (int i = 0; i < 200; ++i) {
        CnfFormula cnf = to_cnf(random_formula(rng, vars, 4));
        for (const auto &clause : cnf.clauses) {
            CHECK_FALSE(clause.empty());
            for (std::size_t a = 0; a < clause.size(); ++a)
                for (std::size_t b = a + 1; b < clause.size(); ++b)
                    CHECK(clause[a] != -clause[b]);
        }
    }
}

TEST_CASE("is_satisfiable basics") {
    CHECK_FALSE(is_satisfiable(Formula::conjunction({A, Formula::negation(A)})));
    CHECK(is_satisfiable(Formula::true_const()));
    CHECK_FALSE(is_satisfiable(Formula::false_const()));
}

TEST_CASE("sat agrees with the enumeration oracle") {
    std::mt19937 rng(42);
    auto vars = make_vars("CONFIG_V", 8);
    for (int i = 0; i < 500; ++i) {
        Formula f = random_formula(rng, vars, 4);
        bool oracle = !enumerate_models(f, vars).empty();
        CHECK(is_satisfiable(f) == oracle);
        CHECK(dpll_sat(to_cnf(f)) == oracle);
    }
}

TEST_CASE("simplify preserves semantics") {
    std::mt19937 rng(11);
    auto vars = make_vars("S", 6);
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, vars, 5);
        CHECK(enumerate_models(f, vars) == enumerate_models(simplify(f), vars));
    }
}

TEST_CASE("substitute/evaluate coherence") {
    std::mt19937 rng(13);
    auto vars = make_vars("C", 5);
    for (int i = 0; i < 200; ++i) {
        Formula f = random_formula(rng, vars, 4);
        for (const auto &a : enumerate_models(Formula::true_const(), vars)) {
            bool direct = evaluate(f, a);
            for (const auto &v : vars)
                CHECK(direct == evaluate(substitute(f, v, a.at(v)), a));
        }
        if (i >= 20)
            break; // the inner loops already cover 32 assignments x 5 vars
    }
}

TEST_CASE("equivalent") {
    CHECK(equivalent(Formula::negation(Formula::negation(A)), A));
    CHECK(equivalent(Formula::conjunction({A, B}), Formula::conjunction({B, A})));
    CHECK_FALSE(equivalent(A, B));
}

TEST_CASE("sat_witness is a model and deterministic") {
    Formula f = Formula::conjunction({Formula::disjunction({A, B}), Formula::negation(A)});
    auto w = sat_witness(f);
    REQUIRE(w.has_value());
    CHECK(evaluate(f, *w));
    CHECK(*w == *sat_witness(f));
    CHECK_FALSE(sat_witness(Formula::conjunction({A, Formula::negation(A)})).has_value());
}

TEST_CASE("formula text round trip") {
    std::mt19937 rng(17);
    auto vars = make_vars("CONFIG_T", 5);
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, vars, 5);
        CHECK(parse_formula(to_string(f)) == f);
    }
    CHECK(to_string(Formula::conjunction({A, Formula::negation(B)})) == "A && !B");
    CHECK(parse_formula("CONFIG_A && !CONFIG_B") ==
          Formula::conjunction({Formula::var("CONFIG_A"),
                                Formula::negation(Formula::var("CONFIG_B"))}));
    CHECK_THROWS_AS(parse_formula("A &&"), FormulaSyntaxError);
    CHECK_THROWS_AS(parse_formula("(A"), FormulaSyntaxError);
}
