#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmlab/fragments.hpp"
#include "fmlab/structure.hpp"

namespace fmlab {

enum class ProductKind { full, lex, disjoint, superposition };

ProductKind product_kind_from_string(const std::string& name);
std::string to_string(ProductKind k);

/// Three-sorted full product of single-sorted factors: sorts main/left/right,
/// main = pairs (row-major), factors carried on their own sorts under their
/// own symbols (suffixed ".1"/".2" on name clashes), and total projections
/// pi1: main -> left, pi2: main -> right. The main sort itself is bare.
Structure full_product(const Structure& m1, const Structure& m2);

/// Two-sorted lexicographic sum of single-sorted ribs over a single-sorted
/// spine: main = disjoint fibres in spine order, rib relations lifted to hold
/// within single fibres only, rib functions returning the sentinel on mixed
/// fibres, spine structure on the spine sort, and the fibre map v: main -> spine.
/// Clashing rib/spine symbol names get ".rib"/".spine" suffixes.
Structure lex_sum(const Structure& spine, const std::vector<Structure>& ribs);

/// Same-signature, single-sorted disjoint union: no cross relations.
Structure disjoint_union(const Structure& a, const Structure& b);

/// One domain carrying both structures: b is pulled back through the bijection
/// a-id -> b-id. Signatures must share no symbol names; |A| = |B|.
Structure free_superposition(const Structure& a, const Structure& b,
                             const std::vector<int>& bijection);

/// Single-sorted structure on one sort of m, keeping exactly the symbols that
/// live entirely on that sort (names preserved).
Structure restrict_to_sort(const Structure& m, int sort);

/// Adds the binary relation {(x,y) : f(x) = f(y), both determined} for a unary
/// function f; e.g. fibre-equality from the lex-sum projection v.
Structure add_kernel_relation(const Structure& m, const std::string& fn,
                              const std::string& name);

/// Lex sum plus spine predicates T0,T1,... marking the isomorphism type of the
/// fibre's rib, applied both to the sum and to the standalone spine. This
/// materializes, at finite scale, the assumption that rib-theory membership is
/// definable in the spine: every {a : rib_a satisfies phi} is a union of the
/// marked classes, so quantifier-free spine types see it.
struct LexEnriched {
    Structure sum;     // two-sorted lex sum with T_i on the spine sort
    Structure spine;   // the spine alone with the same T_i
    int type_count = 0;
    std::vector<int> rib_type; // spine element -> type index
};
LexEnriched lex_sum_enriched(const Structure& spine,
                             const std::vector<Structure>& ribs);

/// Products of fragment members, deduplicated up to isomorphism and bounded by
/// total size. full: all pairwise products plus their induced substructures
/// (the hereditary class the definition closes under); lex: all rib
/// assignments up to spine automorphism; disjoint/superposition: all pairs
/// (all gluing bijections for superposition). budget caps raw candidates.
ClassFragment product_fragment(const ClassFragment& f1, const ClassFragment& f2,
                               ProductKind kind, int bound,
                               std::uint64_t budget = 200000);

} // namespace fmlab
