#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fmlab/errors.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/products.hpp"
#include "fmlab/structure.hpp"

using namespace fmlab;

TEST_CASE("full product carries factors on side sorts with total projections") {
    Structure p = full_product(chain_structure(2), chain_structure(3));
    REQUIRE(p.signature().sort_count() == 3);
    CHECK(p.sort_size(0) == 6); // main = pairs, row-major
    CHECK(p.sort_size(1) == 2);
    CHECK(p.sort_size(2) == 3);

    // clashing factor symbols are suffixed and keep their content
    int r1 = p.signature().relation_index("<.1");
    int r2 = p.signature().relation_index("<.2");
    CHECK(p.tuple_count(r1) == 1);
    CHECK(p.tuple_count(r2) == 3);

    int pi1 = p.signature().function_index("pi1");
    int pi2 = p.signature().function_index("pi2");
    for (int e = 0; e < 6; ++e) {
        CHECK(p.function_value(pi1, {e}) == e / 3);
        CHECK(p.function_value(pi2, {e}) == e % 3);
    }

    // distinct factor names stay unsuffixed
    Structure q = full_product(chain_structure(2), complete_graph(2));
    CHECK(q.signature().relation_index("<") >= 0);
    CHECK(q.signature().relation_index("E") >= 0);

    // the projection names are reserved
    Signature bad({"x"}, {rel_symbol("pi1", 1)});
    CHECK_THROWS_AS(full_product(Structure(bad, {1}), chain_structure(2)), input_error);
}

TEST_CASE("lex sum lifts rib relations within single fibres") {
    Structure sum = lex_sum(chain_structure(2),
                            {complete_graph(2), graph_structure(2, {})});
    REQUIRE(sum.signature().sort_count() == 2);
    CHECK(sum.sort_size(0) == 4); // fibres in spine order
    CHECK(sum.sort_size(1) == 2);

    int v = sum.signature().function_index("v");
    std::vector<int> fibres;
    for (int e = 0; e < 4; ++e) fibres.push_back(sum.function_value(v, {e}));
    CHECK(fibres == std::vector<int>{0, 0, 1, 1});

    int e_rel = sum.signature().relation_index("E");
    CHECK(sum.tuple_count(e_rel) == 2); // only the complete fibre contributes
    CHECK(sum.holds(e_rel, {0, 1}));
    CHECK(sum.holds(e_rel, {1, 0}));
    CHECK(!sum.holds(e_rel, {2, 3}));
    CHECK(!sum.holds(e_rel, {1, 2})); // never across fibres

    int spine_rel = sum.signature().relation_index("<");
    CHECK(sum.tuple_count(spine_rel) == 1);

    // spine and rib sharing a symbol name forces the suffixes
    Structure clash = lex_sum(path_graph(2), {complete_graph(2), complete_graph(2)});
    CHECK(clash.signature().relation_index("E.rib") >= 0);
    CHECK(clash.signature().relation_index("E.spine") >= 0);
}

TEST_CASE("lex sum input validation") {
    CHECK_THROWS_AS(lex_sum(chain_structure(2), {complete_graph(2)}), input_error);
    CHECK_THROWS_AS(lex_sum(chain_structure(2), {complete_graph(2), chain_structure(2)}),
                    input_error); // ribs must share one signature
    Signature vsig({"x"}, {rel_symbol("v", 1)});
    CHECK_THROWS_AS(lex_sum(chain_structure(1), {Structure(vsig, {1})}), input_error);
}

TEST_CASE("rib functions stay fibre-local") {
    Signature fsig({"x"}, {}, {{"g", 2, {0, 0}, 0}});
    Structure rib(fsig, {1});
    rib.set_function(0, {0, 0}, 0);
    Structure sum = lex_sum(set_structure(2), {rib, rib});
    int g = sum.signature().function_index("g");
    CHECK(sum.function_value(g, {0, 0}) == 0);
    CHECK(sum.function_value(g, {1, 1}) == 1);
    CHECK(sum.function_value(g, {0, 1}) == undet); // mixed fibres are undetermined
    CHECK(sum.function_value(g, {1, 0}) == undet);
}

TEST_CASE("disjoint union keeps the parts apart") {
    Structure u = disjoint_union(complete_graph(2), path_graph(3));
    CHECK(u.sort_size(0) == 5);
    CHECK(u.tuple_count(0) == 6);
    CHECK(u.holds(0, {0, 1}));
    CHECK(u.holds(0, {2, 3}));
    CHECK(u.holds(0, {3, 4}));
    CHECK(!u.holds(0, {1, 2}));
    CHECK_THROWS_AS(disjoint_union(chain_structure(2), path_graph(2)), input_error);
}

TEST_CASE("free superposition overlays two vocabularies") {
    Structure s = free_superposition(chain_structure(3), complete_graph(3), {0, 1, 2});
    CHECK(s.sort_size(0) == 3);
    CHECK(s.tuple_count(s.signature().relation_index("<")) == 3);
    CHECK(s.tuple_count(s.signature().relation_index("E")) == 6);

    // the bijection pulls the second structure back
    Structure t = free_superposition(chain_structure(2), graph_structure(2, {{0, 1}}),
                                     {1, 0});
    CHECK(t.holds(t.signature().relation_index("E"), {0, 1}));

    CHECK_THROWS_AS(free_superposition(chain_structure(2), complete_graph(3), {0, 1}),
                    input_error);
    CHECK_THROWS_AS(free_superposition(chain_structure(2), chain_structure(2), {0, 1}),
                    input_error); // shared symbol names
    CHECK_THROWS_AS(free_superposition(chain_structure(2), complete_graph(2), {0, 0}),
                    input_error); // not a bijection
}

TEST_CASE("sort restriction recovers the factors") {
    Structure p = full_product(chain_structure(2), chain_structure(3));
    Structure left = restrict_to_sort(p, 1);
    CHECK(left.signature().relation_index("<.1") >= 0);
    CHECK(left.sort_size(0) == 2);
    CHECK(left.tuple_count(0) == 1);

    Structure sum = lex_sum(chain_structure(2), {complete_graph(2), complete_graph(2)});
    Structure main_part = restrict_to_sort(sum, 0);
    CHECK(main_part.signature().relation_index("E") >= 0);
    CHECK(main_part.signature().relation_index_opt("<") == -1); // lives on the spine
    CHECK(main_part.signature().function_count() == 0);          // v is cross-sort
    CHECK(main_part.tuple_count(0) == 4);
}

TEST_CASE("kernel relations capture fibre equality") {
    Structure sum = lex_sum(chain_structure(2),
                            {complete_graph(2), graph_structure(2, {})});
    Structure k = add_kernel_relation(sum, "v", "same_fibre");
    int r = k.signature().relation_index("same_fibre");
    CHECK(k.tuple_count(r) == 8); // two fibres of four ordered pairs each
    CHECK(k.holds(r, {0, 1}));
    CHECK(k.holds(r, {2, 2}));
    CHECK(!k.holds(r, {1, 2}));
    CHECK_THROWS_AS(add_kernel_relation(sum, "missing", "x"), input_error);
}

TEST_CASE("enriched sums mark rib isomorphism types on the spine") {
    auto enr = lex_sum_enriched(chain_structure(2),
                                {complete_graph(2), graph_structure(2, {})});
    CHECK(enr.type_count == 2);
    CHECK(enr.rib_type[0] != enr.rib_type[1]);

    // type indices depend on the rib shapes, not on fibre order
    auto swapped = lex_sum_enriched(chain_structure(2),
                                    {graph_structure(2, {}), complete_graph(2)});
    CHECK(swapped.rib_type[0] == enr.rib_type[1]);
    CHECK(swapped.rib_type[1] == enr.rib_type[0]);

    // each fibre carries exactly its own type mark, on spine and sum alike
    for (int a = 0; a < 2; ++a) {
        std::string mark = "T" + std::to_string(enr.rib_type[static_cast<size_t>(a)]);
        int rel_sp = enr.spine.signature().relation_index(mark);
        int rel_sum = enr.sum.signature().relation_index(mark);
        CHECK(enr.spine.holds(rel_sp, {a}));
        CHECK(enr.sum.holds(rel_sum, {a}));
        CHECK(enr.spine.tuple_count(rel_sp) == 1);
        CHECK(enr.sum.tuple_count(rel_sum) == 1);
    }

    auto uniform = lex_sum_enriched(chain_structure(2),
                                    {complete_graph(2), complete_graph(2)});
    CHECK(uniform.type_count == 1);
    CHECK(uniform.rib_type == std::vector<int>{0, 0});
}

TEST_CASE("product fragments stay bounded and non-isomorphic") {
    auto g2 = generate_fragment("graphs", 2); // K1, E2, K2
    auto du = product_fragment(g2, g2, ProductKind::disjoint, 4);
    CHECK(du.size() == 6); // E2, E3, K2+K1, E4, K2+2K1, 2K2

    std::set<std::string> keys;
    for (const auto& m : du.members()) {
        CHECK(m.total_size() <= 4);
        keys.insert(canonical_key(m));
    }
    CHECK(keys.size() == du.size());

    auto fp = product_fragment(g2, g2, ProductKind::full, 8);
    CHECK(fp.size() > 0);
    for (const auto& m : fp.members()) CHECK(m.total_size() <= 8);
}
