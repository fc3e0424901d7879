#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "fmlab/errors.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/structure.hpp"
#include "fmlab/twinwidth.hpp"
#include "helpers.hpp"

using namespace fmlab;

namespace {

Structure delete_vertex(const Structure& g, int v) {
    int n = g.sort_size(0);
    std::vector<std::pair<int, int>> edges;
    for (const auto& t : g.tuples(0)) {
        if (t[0] == v || t[1] == v || t[0] >= t[1]) continue;
        edges.emplace_back(t[0] - (t[0] > v ? 1 : 0), t[1] - (t[1] > v ? 1 : 0));
    }
    return make_graph(n - 1, edges);
}

} // namespace

TEST_CASE("contraction rule on hand examples") {
    // the end vertices of a path are twins: no red edge appears
    Trigraph p3 = Trigraph::from_graph(path_graph(3));
    Trigraph merged = contract(p3, 0, 2);
    CHECK(merged.live_count() == 2);
    CHECK(merged.max_red_degree() == 0);
    CHECK(merged.black_edge(0, 1));

    // merging along an edge with different neighbourhoods creates red
    Trigraph skew = contract(p3, 0, 1);
    CHECK(skew.max_red_degree() == 1);
    CHECK(skew.red_edge(0, 2));
    CHECK(!skew.black_edge(0, 2));

    CHECK_THROWS_AS(contract(merged, 1, 2), input_error); // 2 is dead
    CHECK_THROWS_AS(contract(p3, 1, 1), input_error);

    Trigraph bad = p3;
    bad.add_red(0, 1); // overlaps the black edge
    CHECK_THROWS_AS(bad.validate(), input_error);
}

TEST_CASE("graph encoding requirements") {
    CHECK_NOTHROW(require_graph(complete_graph(3)));
    CHECK_THROWS_AS(require_graph(chain_structure(3)), input_error); // asymmetric
    Structure loop = make_graph(2, {{0, 1}});
    loop.add_tuple(0, {0, 0});
    CHECK_THROWS_AS(require_graph(loop), input_error);
    Structure two_rels(Signature::single_sorted({rel_symbol("E", 2), rel_symbol("F", 2)}),
                       {2});
    CHECK_THROWS_AS(require_graph(two_rels), input_error);
    Structure two_sorts(Signature({"a", "b"}, {{"E", 2, {0, 0}}}), {2, 2});
    CHECK_THROWS_AS(require_graph(two_sorts), input_error);
    Structure with_fn(Signature({"x"}, {rel_symbol("E", 2)}, {{"f", 1, {0}, 0}}), {2});
    CHECK_THROWS_AS(require_graph(with_fn), input_error);
}

TEST_CASE("exact widths match brute force through six vertices") {
    auto corpus = graph_corpus(6);
    for (const auto& g : corpus) {
        auto res = twin_width(g);
        CHECK(res.mode == WidthMode::exact);
        CHECK(res.width == testutil::brute_width(g));
        auto replay = replay_trace(g, res.sequence.merges);
        int top = replay.empty() ? 0 : *std::max_element(replay.begin(), replay.end());
        CHECK(top == res.width);
    }
}

TEST_CASE("anchor values") {
    for (int n = 1; n <= 8; ++n) {
        auto res = twin_width(complete_graph(n));
        CHECK(res.width == 0);
        CHECK(res.mode == WidthMode::exact);
        CHECK(is_cograph(complete_graph(n)));
    }
    auto p4 = twin_width(path_graph(4));
    CHECK(p4.width == 1);
    CHECK(p4.nodes_per_depth.size() >= 1); // width 0 was attempted and refuted
    CHECK(p4.nodes_per_depth[0] >= 1);
    CHECK(!is_cograph(path_graph(4)));
    CHECK(twin_width(cycle_structure(5)).width == 2);
    CHECK(twin_width(cycle_structure(6)).width == 2);
    CHECK(twin_width(cycle_structure(7)).width == 2);
    CHECK(is_cograph(cycle_structure(4))); // C4 is complete bipartite
}

TEST_CASE("width histograms on six and seven vertices") {
    std::map<int, int> h6, h7;
    for (const auto& g : graph_corpus(7)) {
        int n = g.sort_size(0);
        if (n < 6) continue;
        int w = twin_width(g).width;
        (n == 6 ? h6 : h7)[w] += 1;
    }
    CHECK(h6[0] == 66);
    CHECK(h6[1] == 76);
    CHECK(h6[2] == 14);
    CHECK(h6.count(3) == 0);
    CHECK(h7[0] == 180);
    CHECK(h7[1] == 594);
    CHECK(h7[2] == 270);
    CHECK(h7.count(3) == 0);
}

TEST_CASE("cographs are exactly the width-zero graphs") {
    for (const auto& g : graph_corpus(6))
        CHECK(is_cograph(g) == (twin_width(g).width == 0));
}

TEST_CASE("graph corpus counts, names, and order") {
    const size_t per_size[] = {1, 2, 4, 11, 34, 156, 1044};
    auto corpus = graph_corpus(7);
    CHECK(corpus.size() == 1252);
    std::map<int, size_t> counts;
    for (const auto& g : corpus) counts[g.sort_size(0)] += 1;
    for (int n = 1; n <= 7; ++n) CHECK(counts[n] == per_size[n - 1]);

    CHECK(corpus[0].name() == "g1_0");
    CHECK(corpus[1].name() == "g2_0");
    CHECK(corpus[2].name() == "g2_1");
    CHECK(corpus[1].tuple_count(0) == 0); // edge-count order within one size
    CHECK(corpus[2].tuple_count(0) == 2);
    for (size_t i = 0; i + 1 < corpus.size(); ++i) {
        CHECK(corpus[i].sort_size(0) <= corpus[i + 1].sort_size(0));
        if (corpus[i].sort_size(0) == corpus[i + 1].sort_size(0))
            CHECK(corpus[i].tuple_count(0) <= corpus[i + 1].tuple_count(0));
    }
}

TEST_CASE("vertex deletion never raises the width") {
    for (const auto& g : graph_corpus(5)) {
        int w = twin_width(g).width;
        for (int v = 0; v < g.sort_size(0); ++v) {
            if (g.sort_size(0) == 1) continue;
            CHECK(twin_width(delete_vertex(g, v)).width <= w);
        }
    }
}

TEST_CASE("solver is deterministic across thread counts") {
    Structure c7 = cycle_structure(7);
    TwwOptions one, two, three;
    two.threads = 2;
    three.threads = 3;
    auto r1 = twin_width(c7, one), r2 = twin_width(c7, two), r3 = twin_width(c7, three);
    CHECK(r1.width == 2);
    CHECK(r2.width == 2);
    CHECK(r3.width == 2);
    CHECK(r1.sequence.merges == r2.sequence.merges);
    CHECK(r1.sequence.merges == r3.sequence.merges);
    auto r2b = twin_width(c7, two);
    CHECK(r2.nodes == r2b.nodes); // node counts repeat at a fixed thread count
    CHECK(r2.nodes_per_depth == r2b.nodes_per_depth);
}

TEST_CASE("budget and size fallbacks label their results honestly") {
    TwwOptions starved;
    starved.budget = 1;
    auto res = twin_width(cycle_structure(6), starved);
    CHECK(res.mode == WidthMode::upper_bound);
    CHECK(res.width >= 2);
    auto replay = replay_trace(cycle_structure(6), res.sequence.merges);
    CHECK(*std::max_element(replay.begin(), replay.end()) == res.width);

    TwwOptions small_bound;
    small_bound.exact_bound = 4;
    CHECK(twin_width(cycle_structure(6), small_bound).mode == WidthMode::upper_bound);

    CHECK_THROWS_AS(twin_width(make_graph(65, {})), input_error);
}

TEST_CASE("trace replay rejects dead merges") {
    CHECK_THROWS_AS(replay_trace(path_graph(3), {{0, 1}, {2, 1}}), input_error);
    CHECK(replay_trace(path_graph(3), {}).empty());
}

TEST_CASE("graph lexicographic sums follow the fibre formula") {
    Structure spine = path_graph(3);
    std::vector<Structure> ribs = {complete_graph(2), graph_structure(2, {}),
                                   complete_graph(2)};
    Structure sum = lex_sum_graph(spine, ribs);
    REQUIRE(sum.sort_size(0) == 6);
    auto fibre = [](int v) { return v / 2; };
    auto inner = [](int v) { return v % 2; };
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            if (a == b) continue;
            bool expect = fibre(a) != fibre(b)
                              ? spine.holds(0, {fibre(a), fibre(b)})
                              : ribs[static_cast<size_t>(fibre(a))].holds(
                                    0, {inner(a), inner(b)});
            CHECK(sum.holds(0, {a, b}) == expect);
        }
    CHECK_THROWS_AS(lex_sum_graph(spine, {complete_graph(2)}), input_error);
}

TEST_CASE("the greedy bound dominates the exact width") {
    for (const auto& g : graph_corpus(5)) {
        auto h = heuristic_width(g);
        CHECK(h.mode == WidthMode::upper_bound);
        CHECK(h.width >= twin_width(g).width);
        auto replay = replay_trace(g, h.sequence.merges);
        int top = replay.empty() ? 0 : *std::max_element(replay.begin(), replay.end());
        CHECK(top == h.width);
    }
}

TEST_CASE("transfer experiments record exact factor and sum widths") {
    auto single = transfer_experiment({path_graph(4)},
                                      {make_graph(1, {})});
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].spine_width == 1);
    CHECK(single.rows[0].max_rib_width == 0);
    CHECK(single.rows[0].sum_width == 1);
    CHECK(single.rows[0].excess == 0);
    CHECK(single.rows[0].multiplicity == 1);
    CHECK(single.assignments == 1);
    CHECK(single.lower_bound_ok);

    // spine symmetry folds equivalent rib assignments into one row
    auto sym = transfer_experiment({complete_graph(2)},
                                   {make_graph(1, {}), complete_graph(2)});
    CHECK(sym.rows.size() == 3);
    CHECK(sym.assignments == 4);
    std::uint64_t orbit2 = 0;
    for (const auto& row : sym.rows)
        if (row.multiplicity == 2) ++orbit2;
    CHECK(orbit2 == 1); // exactly the mixed assignment
    CHECK(sym.max_excess == 0);

    TwwOptions tight;
    tight.exact_bound = 3;
    CHECK_THROWS_AS(transfer_experiment({complete_graph(2)}, {complete_graph(2)}, tight),
                    input_error);
    TwwOptions starved;
    starved.budget = 1;
    CHECK_THROWS_AS(transfer_experiment({cycle_structure(6)}, {make_graph(1, {})}, starved),
                    budget_error);
}
