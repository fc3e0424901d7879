#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmlab/arrow.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/morphisms.hpp"

using namespace fmlab;

TEST_CASE("generated fragments have the expected member counts") {
    CHECK(generate_fragment("linear_orders", 4).size() == 4); // one chain per size
    CHECK(generate_fragment("sets", 4).size() == 4);
    CHECK(generate_fragment("graphs", 3).size() == 7);        // 1 + 2 + 4
    CHECK(generate_fragment("graphs", 4).size() == 18);       // 1 + 2 + 4 + 11
    CHECK_THROWS_AS(generate_fragment("widgets", 3), input_error);

    auto g4 = generate_fragment("graphs", 4);
    for (size_t i = 0; i + 1 < g4.members().size(); ++i)
        CHECK(g4.members()[i].total_size() <= g4.members()[i + 1].total_size());
}

TEST_CASE("fragment membership is isomorphism-invariant") {
    ClassFragment f(complete_graph(2).signature(), 4);
    CHECK(f.add(complete_graph(2)));
    CHECK(!f.add(relabel(complete_graph(2), {{1, 0}}))); // iso copy rejected
    CHECK(f.add(path_graph(3)));
    CHECK(f.find_iso(relabel(path_graph(3), {{2, 0, 1}})) == 1);
    CHECK(f.find_iso(complete_graph(3)) == -1);
    CHECK_THROWS_AS(f.add(complete_graph(5)), input_error);   // over the bound
    CHECK_THROWS_AS(f.add(chain_structure(2)), input_error);  // signature mismatch

    f.add(graph_structure(1, {}));
    f.sort_members();
    CHECK(f.members().front().total_size() == 1);
}

TEST_CASE("ages collect induced substructure types") {
    CHECK(age(chain_structure(4), 3).size() == 3); // one chain per size 1..3
    CHECK(age(path_graph(4), 4).size() == 6);      // K1, K2, E2, P3, K2+K1, P4
    CHECK(age(cycle_structure(5), 5).size() == 7);

    ClassFragment just_p4(path_graph(4).signature(), 4);
    just_p4.add(path_graph(4));
    CHECK(hereditary_closure(just_p4).size() == 6);
}

TEST_CASE("linear orders: HP and AP hold, disjoint JEP outgrows the bound") {
    auto lo4 = generate_fragment("linear_orders", 4);

    auto hp = check_property(lo4, ClassProperty::hp);
    CHECK(hp.holds);
    CHECK(hp.instances > 0);

    auto ap = check_property(lo4, ClassProperty::ap);
    CHECK(ap.holds);
    CHECK(ap.skipped > 0); // pushouts past the bound are skipped, not failed

    auto jep = check_property(lo4, ClassProperty::jep);
    CHECK(!jep.holds);
    CHECK(jep.instances == 10); // unordered member pairs incl. repeats
    CHECK(jep.failures.size() == 6);
    CHECK(jep.failures[0].participants == std::vector<int>{0, 3});

    PropertyOptions overlap;
    overlap.jep_disjoint = false;
    CHECK(check_property(lo4, ClassProperty::jep, overlap).holds);

    // chains amalgamate, but never freely: incomparable pairs appear
    CHECK(check_property(lo4, ClassProperty::sap).holds);
    CHECK(!check_property(lo4, ClassProperty::fap).holds);
}

TEST_CASE("graphs amalgamate freely") {
    auto g3 = generate_fragment("graphs", 3);
    CHECK(check_property(g3, ClassProperty::hp).holds);
    CHECK(check_property(g3, ClassProperty::ap).holds);
    CHECK(check_property(g3, ClassProperty::sap).holds);
    CHECK(check_property(g3, ClassProperty::fap).holds);
}

TEST_CASE("a lone five-cycle is not hereditary") {
    ClassFragment f(cycle_structure(5).signature(), 5);
    f.add(cycle_structure(5));
    auto hp = check_property(f, ClassProperty::hp);
    CHECK(!hp.holds);
    CHECK(hp.instances == 7);        // age of C5
    CHECK(hp.failures.size() == 6);  // everything but C5 itself is missing
    CHECK(hp.failures[0].participants == std::vector<int>{0});
}

TEST_CASE("free amalgamation rejects functional signatures") {
    Signature sig({"x"}, {}, {{"f", 1, {0}, 0}});
    ClassFragment f(sig, 2);
    Structure one(sig, {1});
    one.set_function(0, {0}, 0);
    f.add(one);
    CHECK_THROWS_AS(check_property(f, ClassProperty::fap), input_error);
    CHECK(check_property(f, ClassProperty::hp).holds);
}

TEST_CASE("partition relation on chains of length six") {
    Structure c6 = chain_structure(6), b = chain_structure(3), a = chain_structure(2);
    auto r6 = arrow(c6, b, a, 2);
    CHECK(r6.verdict == ArrowVerdict::holds);
    CHECK(r6.checked == 32768); // 2^15 colourings of the 15 pairs

    auto r5 = arrow(chain_structure(5), b, a, 2);
    CHECK(r5.verdict == ArrowVerdict::fails);
    CHECK(!colouring_has_monochromatic_copy(chain_structure(5), b, a, r5.witness_colouring));

    auto s5 = arrow(chain_structure(5), b, a, 2, ArrowMode::search);
    CHECK(s5.verdict == ArrowVerdict::fails);
    CHECK(!colouring_has_monochromatic_copy(chain_structure(5), b, a, s5.witness_colouring));

    CHECK_THROWS_AS(arrow(c6, b, a, 2, ArrowMode::exhaustive, 100), budget_error);
    auto cheap = arrow(c6, b, a, 2, ArrowMode::search, 5);
    CHECK(cheap.verdict == ArrowVerdict::unknown);
    CHECK(!cheap.note.empty());
}

TEST_CASE("ramsey scan finds the six-chain") {
    auto lo6 = generate_fragment("linear_orders", 6);
    auto scan = ramsey_scan(lo6, chain_structure(2), chain_structure(3), 2);
    CHECK(scan.witness == 5); // the 6-chain, members sorted by size
    REQUIRE(!scan.verdicts.empty());
    CHECK(scan.verdicts.back().second == ArrowVerdict::holds);
    for (size_t i = 0; i + 1 < scan.verdicts.size(); ++i)
        CHECK(scan.verdicts[i].second == ArrowVerdict::fails);

    CHECK_THROWS_AS(ramsey_scan(lo6, chain_structure(2), chain_structure(3), 1), input_error);
}

TEST_CASE("an all-equal colouring is monochromatic somewhere") {
    Structure c4 = chain_structure(4), b = chain_structure(3), a = chain_structure(2);
    std::vector<int> flat(enumerate_embeddings(a, c4).size(), 0);
    CHECK(colouring_has_monochromatic_copy(c4, b, a, flat));
}

TEST_CASE("fragments load from generator manifests") {
    auto f = fragment_from_json(nlohmann::ordered_json::parse(
                                    R"({"generator": "graphs", "max_size": 3})"),
                                ".");
    CHECK(f.size() == 7);
    CHECK_THROWS_AS(fragment_from_json(nlohmann::ordered_json::object(), "."), input_error);
}
