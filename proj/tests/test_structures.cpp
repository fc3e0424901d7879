#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "fmlab/errors.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/structure.hpp"
#include "fmlab/structure_io.hpp"

using namespace fmlab;

TEST_CASE("signature validation") {
    CHECK_THROWS_AS(Signature(std::vector<std::string>{}), input_error);
    CHECK_THROWS_AS(Signature({"x", "x"}), input_error);
    CHECK_THROWS_AS(Signature({"x"}, {rel_symbol("R", 2), rel_symbol("R", 1)}), input_error);
    CHECK_THROWS_AS(Signature({"x"}, {{"R", 2, {0, 1}}}), input_error); // undeclared sort
    CHECK_THROWS_AS(Signature({"x"}, {{"R", 3, {0, 0}}}), input_error); // arity mismatch
    CHECK_THROWS_AS(Signature({"x"}, {{"R", 9, std::vector<int>(9, 0)}}), input_error);

    Signature sig({"a", "b"}, {{"R", 2, {0, 1}}}, {{"f", 1, {0}, 1}});
    CHECK(sig.sort_index("b") == 1);
    CHECK(sig.relation_index("R") == 0);
    CHECK(sig.function_index("f") == 0);
    CHECK(sig.relation_index_opt("missing") == -1);
    CHECK_THROWS_AS(sig.relation_index("missing"), input_error);
}

TEST_CASE("structure population and range checks") {
    Signature sig({"x"}, {rel_symbol("R", 2)}, {{"f", 1, {0}, 0}});
    Structure m(sig, {3}, "demo");
    m.add_tuple(0, {0, 1});
    m.add_tuple(0, {2, 1});
    m.add_tuple(0, {0, 1}); // duplicates collapse
    CHECK(m.tuple_count(0) == 2);
    CHECK(m.holds(0, {0, 1}));
    CHECK(!m.holds(0, {1, 0}));
    auto ts = m.tuples(0);
    CHECK(std::is_sorted(m.tuple_keys(0).begin(), m.tuple_keys(0).end()));
    CHECK(ts.size() == 2);

    CHECK_THROWS_AS(m.add_tuple(0, {0}), input_error);
    CHECK_THROWS_AS(m.add_tuple(0, {0, 3}), input_error);

    // functions default to the undetermined sentinel
    CHECK(m.function_value(0, {1}) == undet);
    m.set_function(0, {1}, 2);
    CHECK(m.function_value(0, {1}) == 2);
    CHECK_THROWS_AS(m.set_function(0, {1}, 5), input_error);
    CHECK_THROWS_AS(m.set_function_table(0, {0, 1}), input_error); // wrong length

    CHECK(m.remove_tuple(0, {0, 1}));
    CHECK(!m.remove_tuple(0, {0, 1}));
    CHECK(m.tuple_count(0) == 1);

    CHECK_THROWS_AS(Structure(sig, {255}), input_error);
    CHECK_THROWS_AS(Structure(sig, {3, 3}), input_error);
}

TEST_CASE("hyperedge flags enforce set semantics") {
    Signature sig({"x"}, {rel_symbol("H", 3)});
    Structure m(sig, {4});
    m.set_hyperedge_flag(0, true);
    std::vector<int> t = {0, 1, 2};
    std::sort(t.begin(), t.end());
    do m.add_tuple(0, t);
    while (std::next_permutation(t.begin(), t.end()));
    CHECK_NOTHROW(m.validate());

    Structure bad = m;
    bad.add_tuple(0, {1, 1, 2});
    CHECK_THROWS_AS(bad.validate(), input_error); // repeated entry

    Structure asym = m;
    asym.remove_tuple(0, {2, 1, 0});
    CHECK_THROWS_AS(asym.validate(), input_error); // permutation missing
}

TEST_CASE("tuple packing round-trips") {
    std::vector<int> t = {3, 0, 200, 17};
    CHECK(Structure::unpack(Structure::pack(t), 4) == t);
    CHECK(Structure::pack({0}) != Structure::pack({1}));
}

TEST_CASE("structure order is total on equal signatures") {
    Structure a = chain_structure(2), b = chain_structure(3);
    CHECK(structure_less(a, b));     // smaller domain first
    CHECK(!structure_less(b, a));
    CHECK(!structure_less(a, a));
    Structure e2 = graph_structure(2, {}), k2 = complete_graph(2);
    CHECK(structure_less(e2, k2) != structure_less(k2, e2));
}

TEST_CASE("json round-trip preserves everything") {
    Signature sig({"x"}, {rel_symbol("R", 2), rel_symbol("H", 3)}, {{"f", 1, {0}, 0}});
    Structure m(sig, {4}, "io_demo");
    m.add_tuple(0, {0, 3});
    for (auto& t : std::vector<std::vector<int>>{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}})
        m.add_tuple(1, t);
    m.set_hyperedge_flag(1, true);
    m.set_function(0, {0}, 2);

    Structure back = structure_from_json(structure_to_json(m));
    CHECK(back == m);
    CHECK(back.name() == "io_demo");
    CHECK(back.hyperedge_flag(1));

    auto tmp = std::filesystem::temp_directory_path() / "fmlab_io_demo.json";
    save_structure(m, tmp.string());
    CHECK(load_structure(tmp.string()) == m);
    std::filesystem::remove(tmp);

    CHECK_THROWS_AS(load_structure("/nonexistent/file.json"), input_error);
    CHECK_THROWS_AS(structure_from_json(ordered_json::array()), input_error);
}

TEST_CASE("embedding enumeration counts") {
    // order-preserving pairs in a 6-chain: 6 choose 2
    CHECK(enumerate_embeddings(chain_structure(2), chain_structure(6)).size() == 15);
    // ordered pairs of distinct vertices in a triangle
    CHECK(enumerate_embeddings(complete_graph(2), complete_graph(3)).size() == 6);
    // centre of a 3-path must map to a degree-2 vertex of the 4-path
    CHECK(enumerate_embeddings(path_graph(3), path_graph(4)).size() == 4);
    // signature mismatch is rejected
    CHECK_THROWS_AS(enumerate_embeddings(chain_structure(2), path_graph(3)), input_error);
    // enumeration budget
    CHECK_THROWS_AS(enumerate_embeddings(complete_graph(2), complete_graph(5), 3), budget_error);

    Embedding partial;
    partial.map = {{-1, 2}};
    auto found = find_embedding(chain_structure(2), chain_structure(4), partial);
    REQUIRE(found.has_value());
    CHECK(found->map[0][1] == 2);
    CHECK(found->map[0][0] < 2);
}

TEST_CASE("automorphism groups of the standard fixtures") {
    CHECK(automorphism_group(complete_graph(4)).order == 24);
    CHECK(automorphism_group(chain_structure(5)).order == 1);
    CHECK(automorphism_group(cycle_structure(5)).order == 10);
    CHECK(automorphism_group(cycle_structure(6)).order == 12);
    CHECK(automorphism_group(path_graph(4)).order == 2);
    CHECK(automorphism_group(graph_structure(4, {{0, 1}, {2, 3}})).order == 8);

    auto g = automorphism_group(path_graph(4));
    auto orbits = element_orbits(path_graph(4), g);
    CHECK(orbits[0][0] == orbits[0][3]);
    CHECK(orbits[0][1] == orbits[0][2]);
    CHECK(orbits[0][0] != orbits[0][1]);
    auto c5_orbits = element_orbits(cycle_structure(5), automorphism_group(cycle_structure(5)));
    CHECK(std::set<int>(c5_orbits[0].begin(), c5_orbits[0].end()).size() == 1);

    // least orbit representative of a tuple
    auto rep = orbit_min_tuple(g, 0, {3, 2});
    CHECK(rep == std::vector<int>{0, 1});
}

TEST_CASE("isomorphism and canonical keys") {
    Structure p4 = path_graph(4);
    Structure shuffled = relabel(p4, {{2, 0, 3, 1}});
    CHECK(are_isomorphic(p4, shuffled).has_value());
    CHECK(canonical_key(p4) == canonical_key(shuffled));

    // same vertex and edge count, different shape
    Structure star = graph_structure(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(!are_isomorphic(p4, star).has_value());
    CHECK(canonical_key(p4) != canonical_key(star));

    std::set<std::string> keys;
    for (const auto& g : all_graphs(4)) keys.insert(canonical_key(g));
    CHECK(keys.size() == 11);

    // the canonical permutation reduces isomorphic copies to one labelling
    CHECK(relabel(p4, canonical_permutation(p4)) ==
          relabel(shuffled, canonical_permutation(shuffled)));
}

TEST_CASE("induced substructures and function closure") {
    Structure c4 = chain_structure(4);
    auto sub = induced_substructure(c4, {{1, 3}});
    CHECK(sub.structure.sort_size(0) == 2);
    CHECK(are_isomorphic(sub.structure, chain_structure(2)).has_value());
    CHECK(sub.renaming[0] == std::vector<int>{-1, 0, -1, 1});
    CHECK(sub.elements[0] == std::vector<int>{1, 3});

    Signature sig({"x"}, {}, {{"f", 1, {0}, 0}});
    Structure m(sig, {3});
    m.set_function(0, {0}, 1);
    m.set_function(0, {1}, 2);
    m.set_function(0, {2}, 2);
    CHECK_THROWS_AS(induced_substructure(m, {{0}}, ClosurePolicy::require), input_error);
    auto closed = induced_substructure(m, {{0}}, ClosurePolicy::extend);
    CHECK(closed.structure.sort_size(0) == 3);
    CHECK(closed.elements[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("relabelling is invertible") {
    Structure c5 = cycle_structure(5);
    std::vector<int> perm = {4, 2, 0, 1, 3};
    std::vector<int> inv(5);
    for (int i = 0; i < 5; ++i) inv[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
    CHECK(relabel(relabel(c5, {perm}), {inv}) == c5);
}
