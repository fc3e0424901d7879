#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmlab/formula.hpp"
#include "fmlab/structure.hpp"

namespace fmlab {

/// Rooted plane binary tree; node 0 is the root, leaves have no children.
/// The planar left-to-right leaf order doubles as the convex (or, read
/// circularly, convex cyclic) order of the derived C/D-relations.
struct BinaryTree {
    struct Node {
        int left = -1;
        int right = -1;
    };
    std::vector<Node> nodes;

    int leaf_count() const;
    std::vector<int> leaf_order() const; // node ids, planar order
};

BinaryTree random_binary_tree(int leaves, std::uint64_t seed);

/// Every plane shape with exactly `leaves` leaves (Catalan many).
std::vector<BinaryTree> all_binary_trees(int leaves);

Structure c_from_tree(const BinaryTree& t);   // {C}
Structure oc_from_tree(const BinaryTree& t);  // {C, <}
Structure d_from_tree(const BinaryTree& t);   // {D}
Structure od_from_tree(const BinaryTree& t);  // {D, <}
Structure cod_from_tree(const BinaryTree& t); // {D, CO}

/// kind: lo | co | og | oh3 | oc | od | cod. Deterministic in (kind, size,
/// seed); every output passes its axiom suite.
Structure gen_structure(const std::string& kind, int size, std::uint64_t seed);

/// Kinds with a shipped axiom suite (gen kinds plus bare "c" and "d").
std::vector<std::string> axiom_kinds();
std::vector<NamedFormula> axiom_suite(const std::string& kind);

struct AxiomVerdict {
    std::string name;
    bool passed = false;
    std::map<std::string, int> counterexample; // empty when passed
};

std::vector<AxiomVerdict> validate_structure(const Structure& m,
                                             const std::string& kind,
                                             int threads = 1);
bool all_passed(const std::vector<AxiomVerdict>& verdicts);

/// C-relation on m minus the point: C(x;y,z) iff D(point,x;y,z). Output
/// carries {C} over the remaining elements in id order.
Structure d_to_c_pointed(const Structure& m, int point);

/// D-relation on m plus one fresh point (the last id), by the clause-by-clause
/// translation; inverse to d_to_c_pointed at that point.
Structure c_to_d(const Structure& m);

/// Order-convex D with total order -> convexly ordered C on the non-minimum
/// elements: C(x;y,z) iff D(min,x;y,z), order restricted.
Structure od_to_oc(const Structure& m);

/// One-variable literal system over a cyclically ordered D-relation:
/// CO(a,x,b) for (a,b) in p; D(a,b;c,x) for triples in l; D(x,a;b,c) for
/// triples in r; x != a for a in q (q must contain every parameter);
/// optional x = a constraints.
struct LiteralSystem {
    std::vector<std::pair<int, int>> p;
    std::vector<std::array<int, 3>> l;
    std::vector<std::array<int, 3>> r;
    std::vector<int> q;
    std::vector<int> equalities;
};

LiteralSystem literal_system_from_json(const nlohmann::ordered_json& j);

struct LiteralSolveResult {
    int witness = -1;              // first satisfying element, -1 = UNSAT
    std::vector<int> satisfying;   // all satisfying elements
    bool exhaustive_sat = false;
    /// The dense-model reduction predicate (CO-subsystem coherence); may
    /// disagree with the exhaustive verdict on finite models.
    bool reduction_sat = false;
    bool agree = false;
};

LiteralSolveResult solve_literal_system(const Structure& m, const LiteralSystem& s);

} // namespace fmlab
