#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fmlab/errors.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/indiscernibles.hpp"
#include "fmlab/products.hpp"
#include "fmlab/relzoo.hpp"
#include "fmlab/structure.hpp"

using namespace fmlab;

namespace {

IndexedSequence seq(Structure index, Structure target,
                    std::vector<std::vector<int>> map, int k = 1,
                    PatternMode mode = PatternMode::qftype) {
    IndexedSequence s;
    s.index = std::move(index);
    s.target = std::move(target);
    s.k = k;
    s.map = std::move(map);
    s.mode = mode;
    return s;
}

/// Ordered graph on one edge: four chain-ordered points, E = {0,1} only.
Structure single_edge_og() {
    Structure m(Signature::single_sorted({rel_symbol("E", 2), rel_symbol("<", 2)}), {4});
    m.set_hyperedge_flag(0, true);
    m.add_tuple(0, {0, 1});
    m.add_tuple(0, {1, 0});
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m.add_tuple(1, {i, j});
    return m;
}

} // namespace

TEST_CASE("indiscernibility over a chain index") {
    Structure c3 = chain_structure(3);
    CHECK(is_indiscernible(seq(c3, c3, {{0}, {1}, {2}})).indiscernible);
    CHECK(is_indiscernible(seq(c3, c3, {{0}, {0}, {0}})).indiscernible);

    auto bad = is_indiscernible(seq(c3, c3, {{0}, {1}, {0}}));
    CHECK(!bad.indiscernible);
    CHECK(bad.first == std::vector<int>{0, 1});
    CHECK(bad.second == std::vector<int>{0, 2});

    // restricting the tuple length can hide the failure
    CHECK(is_indiscernible(seq(c3, c3, {{0}, {1}, {0}}), 1).indiscernible);
}

TEST_CASE("orbit patterns are finer than quantifier-free types") {
    // P4 swaps ends only, so (0,1) and (1,0) sit in different orbits even
    // though their quantifier-free types agree.
    Structure p4 = path_graph(4);
    auto qf = seq(set_structure(2), p4, {{0}, {1}});
    CHECK(is_indiscernible(qf).indiscernible);
    auto orb = seq(set_structure(2), p4, {{0}, {1}}, 1, PatternMode::orbit);
    CHECK(!is_indiscernible(orb).indiscernible);

    // on a vertex-transitive target with pair-transitive group the modes agree
    auto orb_k3 = seq(set_structure(2), complete_graph(3), {{0}, {1}}, 1,
                      PatternMode::orbit);
    CHECK(is_indiscernible(orb_k3).indiscernible);
}

TEST_CASE("sequence entries are validated") {
    CHECK_THROWS_AS(is_indiscernible(seq(chain_structure(2), chain_structure(2),
                                         {{0}, {5}})),
                    input_error);
    CHECK_THROWS_AS(is_indiscernible(seq(chain_structure(2), chain_structure(2),
                                         {{0}})),
                    input_error); // map length must match the index
}

TEST_CASE("exhaustive collapse scan over an identity reduct") {
    ReductSpec keep_order;
    keep_order.keep = {"<"};
    auto report = collapse_scan(chain_structure(4), keep_order, chain_structure(3));
    CHECK(report.exhaustive);
    CHECK(report.scanned == 81);            // 3^4 maps
    CHECK(report.indiscernible_count == 3); // the constant maps only
    CHECK(report.uncollapsed_count == 0);
    CHECK(report.collapses);
    CHECK(report.witnesses.empty());
}

TEST_CASE("dropping the edge relation uncollapses an ordered graph") {
    Structure idx = single_edge_og();
    ReductSpec keep_order;
    keep_order.keep = {"<"};
    auto report = collapse_scan(idx, keep_order, chain_structure(6));
    CHECK(report.exhaustive);
    CHECK(report.scanned == 1296);
    CHECK(report.uncollapsed_count > 0);
    CHECK(!report.collapses);
    REQUIRE(!report.witnesses.empty());

    Structure reduced = apply_reduct(idx, keep_order);
    for (const auto& w : report.witnesses) {
        CHECK(is_indiscernible(seq(idx, chain_structure(6), w)).indiscernible);
        CHECK(!is_indiscernible(seq(reduced, chain_structure(6), w)).indiscernible);
    }
}

TEST_CASE("sampled scans are seed-deterministic") {
    Structure idx = single_edge_og();
    ReductSpec keep_order;
    keep_order.keep = {"<"};
    CollapseOptions opts;
    opts.samples = 200;
    opts.seed = 7;
    auto a = collapse_scan(idx, keep_order, chain_structure(6), opts);
    auto b = collapse_scan(idx, keep_order, chain_structure(6), opts);
    CHECK(!a.exhaustive);
    CHECK(a.scanned == 200);
    CHECK(a.indiscernible_count == b.indiscernible_count);
    CHECK(a.uncollapsed_count == b.uncollapsed_count);
    CHECK(a.witnesses == b.witnesses);
}

TEST_CASE("collapse budget caps the exhaustive map space") {
    CollapseOptions tiny;
    tiny.budget = 10;
    CHECK_THROWS_AS(collapse_scan(chain_structure(4), ReductSpec{}, chain_structure(3),
                                  tiny),
                    budget_error);
}

TEST_CASE("irreflexivize strips repeated-entry tuples") {
    Structure sum = lex_sum(chain_structure(2),
                            {complete_graph(2), graph_structure(2, {})});
    Structure k = add_kernel_relation(sum, "v", "same_fibre");
    int r = k.signature().relation_index("same_fibre");
    CHECK(k.tuple_count(r) == 8);
    Structure irr = irreflexivize(k);
    CHECK(irr.tuple_count(r) == 4); // the four diagonal pairs vanish
    for (const auto& t : irr.tuples(r)) CHECK(t[0] != t[1]);
}

TEST_CASE("arity reducts keep low-arity relations and drop functions") {
    Signature sig({"x"}, {rel_symbol("E", 2), rel_symbol("R", 3)}, {{"f", 1, {0}, 0}});
    auto spec = arity_reduct(sig, 2);
    CHECK(spec.keep == std::vector<std::string>{"E"});
    CHECK(spec.define.empty());
    CHECK(arity_reduct(sig, 3).keep == std::vector<std::string>{"E", "R"});
    CHECK(arity_reduct(sig, 1).keep.empty());
}

TEST_CASE("two-level graph acceptability") {
    // rungs only
    CHECK(two_level_graph_ok(3, {{0, 3}, {1, 4}, {2, 5}}));
    // within-level only
    CHECK(two_level_graph_ok(3, {{0, 1}, {3, 4}}));
    // connected once isolated vertices are set aside
    CHECK(two_level_graph_ok(3, {{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 5}}));
    CHECK(two_level_graph_ok(2, {}));
    // two disjoint cross edges: neither rungs, nor one level, nor connected
    CHECK(!two_level_graph_ok(2, {{0, 3}, {1, 2}}));
}

TEST_CASE("reasonable index structures") {
    CHECK(is_reasonable(set_structure(1)).reasonable);
    CHECK(is_reasonable(set_structure(3)).reasonable);
    CHECK(is_reasonable(chain_structure(3)).reasonable);
    CHECK(is_reasonable(chain_structure(4)).reasonable);
    CHECK(is_reasonable(complete_graph(3)).reasonable);
    CHECK(is_reasonable(cycle_structure(5)).reasonable);

    CHECK(is_reasonable(chain_structure(3)).pair_type_count == 3);
    CHECK(is_reasonable(set_structure(3)).pair_type_count == 2);
    CHECK(is_reasonable(complete_graph(3)).pair_type_count == 2);
}

TEST_CASE("two-element indices always fail the two-level test") {
    // With two indices, "different element and different level" wires up two
    // disjoint cross edges, so no two-element index is reasonable.
    for (const Structure& idx : {set_structure(2), chain_structure(2),
                                 complete_graph(2), graph_structure(2, {})}) {
        auto res = is_reasonable(idx);
        CHECK(!res.reasonable);
        REQUIRE(!res.edges.empty());
        CHECK(!two_level_graph_ok(2, res.edges));
        CHECK(!res.rule.empty());
    }
    CHECK(!is_reasonable(cycle_structure(4)).reasonable);
    CHECK(!is_reasonable(cycle_structure(6)).reasonable);
    CHECK(!is_reasonable(graph_structure(4, {{0, 1}, {2, 3}})).reasonable);
}

TEST_CASE("a blocked chain is unreasonable with a replayable wire diagram") {
    Structure m(Signature::single_sorted({rel_symbol("<", 2), rel_symbol("E", 2)}), {6});
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) m.add_tuple(0, {i, j});
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i / 3 == j / 3) m.add_tuple(1, {i, j});
    auto res = is_reasonable(m);
    CHECK(!res.reasonable);
    REQUIRE(!res.edges.empty());
    CHECK(!two_level_graph_ok(6, res.edges));
}

TEST_CASE("primitivity of the index action") {
    auto c5 = is_primitive(cycle_structure(5));
    CHECK(c5.primitive);
    CHECK(c5.aut_order == 10);
    CHECK(is_primitive(set_structure(3)).primitive);
    CHECK(is_primitive(complete_graph(3)).primitive);

    auto rigid = is_primitive(chain_structure(4));
    CHECK(!rigid.primitive);
    CHECK(rigid.aut_order == 1);
    CHECK(rigid.seed.first >= 0);
    CHECK(!rigid.congruence.empty());

    auto matching = is_primitive(graph_structure(4, {{0, 1}, {2, 3}}));
    CHECK(!matching.primitive);
    std::set<int> classes(matching.congruence.begin(), matching.congruence.end());
    CHECK(classes.size() == 2); // the two components form a block system

    CHECK(!is_primitive(cycle_structure(6)).primitive); // antipodal blocks
}

TEST_CASE("configuration search interprets patterns inside targets") {
    auto hit = find_configuration(chain_structure(6), chain_structure(2), 1);
    CHECK(hit.found);
    REQUIRE(hit.injection.size() == 2);
    CHECK(hit.injection[0].size() == 1);
    CHECK(hit.injection[0] != hit.injection[1]);
    REQUIRE(hit.interpretation.size() == 1);
    CHECK(hit.interpretation[0].first == "<");
    CHECK(hit.steps > 0);

    // a triangle needs either equality or a disjunction over the order
    TemplateOptions bare;
    bare.max_literals = 1;
    bare.include_equality = false;
    auto miss = find_configuration(chain_structure(6), complete_graph(3), 1, bare);
    CHECK(!miss.found);
    CHECK(miss.exhausted);
    CHECK(find_configuration(chain_structure(6), complete_graph(3), 1).found);

    TemplateOptions starved;
    starved.budget = 2;
    CHECK_THROWS_AS(find_configuration(chain_structure(6), complete_graph(3), 1, starved),
                    budget_error);
    CHECK_THROWS_AS(find_configuration(chain_structure(6), chain_structure(2), 3),
                    input_error);
}

TEST_CASE("independence patterns in a chain stop at depth one") {
    Structure c8 = chain_structure(8);
    auto hit = find_ip_pattern(c8, "<", 1, 1);
    CHECK(hit.found);
    REQUIRE(hit.a.size() == 1);
    REQUIRE(hit.b.size() == 2);
    int cell = hit.a[0][0];
    // the trace of b over the grid cell must realize each subset exactly
    CHECK(!c8.holds(0, {hit.b[0], cell}));
    CHECK(c8.holds(0, {hit.b[1], cell}));

    // depth two would need elements splitting two cells both ways
    auto miss = find_ip_pattern(c8, "<", 1, 2);
    CHECK(!miss.found);
    CHECK(miss.exhausted);
    CHECK(miss.grids == 64);

    CHECK(find_ip_pattern(c8, "<", 1, 1, {true, 100'000'000}).found);
    CHECK_THROWS_AS(find_ip_pattern(c8, "<", 1, 1, {false, 3}), budget_error);
    CHECK_THROWS_AS(find_ip_pattern(c8, "E", 1, 1), input_error);
    CHECK_THROWS_AS(find_ip_pattern(c8, "<", 2, 1), input_error); // arity mismatch
}
