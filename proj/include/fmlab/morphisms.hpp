#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmlab/structure.hpp"

namespace fmlab {

/// An injective strong homomorphism between structures over one signature:
/// relations and function values are preserved and reflected. map[s][a] is the
/// image of element a of sort s.
struct Embedding {
    std::vector<std::vector<int>> map;

    int apply(int sort, int element) const {
        return map[static_cast<size_t>(sort)][static_cast<size_t>(element)];
    }
    bool operator==(const Embedding& other) const { return map == other.map; }
    bool operator<(const Embedding& other) const { return map < other.map; }
};

/// All embeddings of A into C in lexicographic order of the flattened map.
/// Throws input_error when the signatures differ, budget_error past `budget`
/// enumerated embeddings (0 = unlimited).
std::vector<Embedding> enumerate_embeddings(const Structure& a, const Structure& c,
                                            std::size_t budget = 0);

/// First embedding extending `partial` (-1 entries are unassigned), or nullopt.
std::optional<Embedding> find_embedding(const Structure& a, const Structure& c,
                                        const Embedding& partial);

/// Isomorphism test with witness; nullopt when none exists.
std::optional<Embedding> are_isomorphic(const Structure& a, const Structure& b);

struct AutomorphismGroup {
    std::vector<Embedding> generators; // identity omitted
    unsigned long long order = 1;
};

/// Exact automorphism group via stabilizer-chain search: the returned
/// transversal representatives generate the group and `order` is exact.
AutomorphismGroup automorphism_group(const Structure& m);

/// Orbit partition of single elements under the generated group.
/// Returns per-sort orbit ids (elements in one orbit share an id).
std::vector<std::vector<int>> element_orbits(const Structure& m,
                                             const AutomorphismGroup& g);

/// Lexicographically least image of a tuple under the generated group; entries
/// live in the designated sort. Used for orbit-mode indiscernible patterns.
std::vector<int> orbit_min_tuple(const AutomorphismGroup& g, int sort,
                                 const std::vector<int>& tuple);

enum class ClosurePolicy { require, extend };

struct InducedSubstructure {
    Structure structure;
    std::vector<std::vector<int>> renaming; // old id -> new id, -1 = dropped
    std::vector<std::vector<int>> elements; // new id -> old id
};

/// Substructure induced on per-sort element subsets. With ClosurePolicy::require
/// the subsets must be closed under function application (input_error names the
/// offending application); with ::extend the closure is taken and reported via
/// the renaming maps.
InducedSubstructure induced_substructure(const Structure& m,
                                         std::vector<std::vector<int>> subsets,
                                         ClosurePolicy policy = ClosurePolicy::require);

/// Relabels elements: perm[s][old] = new id (a bijection per sort).
Structure relabel(const Structure& m, const std::vector<std::vector<int>>& perm);

/// Canonical byte string: equal keys iff isomorphic. Computed by colour
/// refinement plus backtracking over minimal relation encodings, with
/// discovered automorphisms pruning symmetric branches.
std::string canonical_key(const Structure& m, std::size_t budget = 4000000);

/// A relabelling of m whose encoding realizes the canonical key.
std::vector<std::vector<int>> canonical_permutation(const Structure& m,
                                                    std::size_t budget = 4000000);

} // namespace fmlab
