#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fmlab/errors.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/formula.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/relzoo.hpp"
#include "fmlab/structure.hpp"

using namespace fmlab;

static std::string reformat(const std::string& text) {
    return format_formula(parse_formula(text));
}

TEST_CASE("parse and format round-trip") {
    for (const std::string text : {
             "forall x. forall y. <(x, y) -> !(y = x)",
             "exists x: main. R(x, x)",
             "forall x. (A(x) | B(x)) & C(x)",
             "forall a. forall b. forall c. C(a; b, c) <-> C(a; c, b)",
             "exists x. exists y. !(x = y) & (E(x, y) | E(y, x))",
         }) {
        std::string once = reformat(text);
        CHECK(reformat(once) == once); // fixed point after one normalisation
    }
    // `,` and `;` are interchangeable argument separators
    CHECK(reformat("D(a, x; y, z)") == reformat("D(a; x; y; z)"));
    // precedence: ! over & over | over -> over <->
    CHECK(reformat("A(x) | B(x) & C(x)") == reformat("A(x) | (B(x) & C(x))"));
    CHECK(reformat("A(x) -> B(x) -> C(x)") == reformat("A(x) -> (B(x) -> C(x))"));
    CHECK(reformat("!A(x) & B(x)") == reformat("(!A(x)) & B(x)"));
    // comments vanish
    CHECK(reformat("R(x, y) # trailing note") == reformat("R(x, y)"));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse_formula("R(x"), parse_error);
    CHECK_THROWS_AS(parse_formula("forall . R(x)"), parse_error);
    CHECK_THROWS_AS(parse_formula("x ="), parse_error);
    CHECK_THROWS_AS(parse_formula(""), parse_error);
    CHECK_THROWS_AS(parse_formula("R(x) &"), parse_error);
    try {
        parse_formula("R(x, y) @");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("@") != std::string::npos);
    }
}

TEST_CASE("free variables in first-occurrence order with inferred sorts") {
    Signature sig({"p", "q"}, {{"R", 2, {0, 1}}});
    auto f = parse_formula("R(a, b) & !(a = c)");
    auto fv = free_variables(f, sig);
    REQUIRE(fv.size() == 3);
    CHECK(fv[0] == std::pair<std::string, int>{"a", 0});
    CHECK(fv[1] == std::pair<std::string, int>{"b", 1});
    CHECK(fv[2] == std::pair<std::string, int>{"c", 0}); // equality propagates a's sort

    // bound variables are not free
    auto g = parse_formula("forall a. exists b: q. R(a, b) & R(a, d)");
    auto gv = free_variables(g, sig);
    REQUIRE(gv.size() == 1);
    CHECK(gv[0].first == "d");

    // sort clashes are rejected
    CHECK_THROWS_AS(free_variables(parse_formula("R(a, a)"), sig), input_error);
    CHECK_THROWS_AS(free_variables(parse_formula("R(a)"), sig), input_error);
    CHECK_THROWS_AS(free_variables(parse_formula("S(a)"), sig), input_error);
}

TEST_CASE("evaluation on a three-element chain") {
    Structure c3 = chain_structure(3);
    CHECK(evaluate(c3, parse_formula("forall x. forall y. !(x = y) -> <(x, y) | <(y, x)")));
    CHECK(evaluate(c3, parse_formula("forall x. !<(x, x)")));
    CHECK(!evaluate(c3, parse_formula("forall x. exists y. <(x, y)")));
    CHECK(evaluate(c3, parse_formula("<(x, y)"), {{"x", 0}, {"y", 2}}));
    CHECK(!evaluate(c3, parse_formula("<(x, y)"), {{"x", 2}, {"y", 0}}));

    // a compiled evaluator is reusable across assignments
    Evaluator ev(c3, parse_formula("<(x, y) & !(x = y)"));
    REQUIRE(ev.free_vars().size() == 2);
    CHECK(ev.eval({0, 1}));
    CHECK(!ev.eval({1, 0}));
    CHECK(!ev.eval({1, 1}));
}

TEST_CASE("counterexample search over the universal prefix") {
    Structure c3 = chain_structure(3);
    CHECK(!find_counterexample(c3, parse_formula("forall x. forall y. x = y | !(x = y)")));
    auto cx = find_counterexample(c3, parse_formula("forall x. exists y. <(x, y)"));
    REQUIRE(cx.has_value());
    CHECK(cx->at("x") == 2); // only the maximum has no successor
    auto pair_cx = find_counterexample(c3, parse_formula("forall x. forall y. <(x, y)"));
    REQUIRE(pair_cx.has_value());
    // the returned assignment really falsifies the matrix
    CHECK(!evaluate(c3, parse_formula("<(x, y)"), *pair_cx));
}

TEST_CASE("quantifier-free types separate order orientation") {
    Structure c3 = chain_structure(3);
    CHECK(qf_type(c3, {0, 1}) == qf_type(c3, {1, 2}));
    CHECK(qf_type(c3, {0, 1}) != qf_type(c3, {1, 0}));
    CHECK(qf_type(c3, {0, 0}) == qf_type(c3, {2, 2}));
    CHECK(qf_type(c3, {0, 0}) != qf_type(c3, {0, 1})); // equality pattern differs
}

TEST_CASE("quantifier-free types close under functions") {
    Signature sig({"x"}, {}, {{"f", 1, {0}, 0}});
    Structure m(sig, {3});
    m.set_function(0, {0}, 0); // fixed point
    m.set_function(0, {1}, 2);
    m.set_function(0, {2}, 2);
    // bare points are equality-indistinguishable, but their f-orbits differ
    CHECK(qf_type(m, std::vector<int>{0}) != qf_type(m, std::vector<int>{1}));
    CHECK(qf_type(m, std::vector<int>{1}) != qf_type(m, std::vector<int>{2}));
}

TEST_CASE("defined relations and reducts") {
    Structure c3 = chain_structure(3);
    Structure ext = add_defined_relation(c3, "S", parse_formula("exists z. <(x, z) & <(z, y)"));
    int s = ext.signature().relation_index("S");
    CHECK(ext.tuple_count(s) == 1);
    CHECK(ext.holds(s, {0, 2}));

    ReductSpec keep_spec;
    keep_spec.keep = {"<"};
    Structure kept = apply_reduct(c3, keep_spec);
    CHECK(kept.signature().relation_count() == 1);
    CHECK(kept.tuple_count(0) == 3);

    Structure bare = apply_reduct(c3, ReductSpec{});
    CHECK(bare.signature().relation_count() == 0);
    CHECK(bare.sort_size(0) == 3);

    auto spec = reduct_from_json(nlohmann::ordered_json::parse(
        R"js({"keep": [], "define": [{"name": "adj", "formula": "<(x, y) & !(exists z. <(x, z) & <(z, y))"}]})js"));
    Structure adj = apply_reduct(c3, spec);
    int a = adj.signature().relation_index("adj");
    CHECK(adj.tuple_count(a) == 2); // covering pairs of the chain
    CHECK(adj.holds(a, {0, 1}));
    CHECK(adj.holds(a, {1, 2}));

    CHECK_THROWS_AS(apply_reduct(c3, ReductSpec{{"missing"}, {}}), input_error);
}

TEST_CASE("axiom suite parsing") {
    auto suite = parse_axiom_suite(
        "# header comment\n"
        "[first]\n"
        "forall x. !<(x, x)\n"
        "\n"
        "[second]\n"
        "# inner comment\n"
        "forall x. forall y.\n"
        "  <(x, y) -> !<(y, x)\n");
    REQUIRE(suite.size() == 2);
    CHECK(suite[0].name == "first");
    CHECK(suite[1].name == "second");
    CHECK(evaluate(chain_structure(3), suite[1].formula));

    CHECK_THROWS_AS(parse_axiom_suite("[unterminated]\n"), parse_error);
}

TEST_CASE("shipped axiom suites load and name their kinds") {
    auto kinds = axiom_kinds();
    CHECK(kinds.size() == 9);
    for (const std::string k : {"lo", "co", "og", "oh3", "oc", "od", "cod", "c", "d"})
        CHECK(std::find(kinds.begin(), kinds.end(), k) != kinds.end());
    CHECK(axiom_suite("lo").size() >= 3);
    CHECK_THROWS_AS(axiom_suite("nope"), input_error);
}
