#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmlab/eval.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/structure.hpp"

namespace fmlab {

/// How image tuples are compared: by quantifier-free type, or by their orbit
/// under the target's automorphism group.
enum class PatternMode { qftype, orbit };

PatternMode pattern_mode_from_string(const std::string& s);
std::string to_string(PatternMode m);

/// A sequence indexed by the elements of a single-sorted structure `index`,
/// mapping each index element to a k-tuple of `target` elements drawn from
/// sort `sort`.
struct IndexedSequence {
    Structure index;
    Structure target;
    int k = 1;
    int sort = 0;
    std::vector<std::vector<int>> map; // index element -> k-tuple
    PatternMode mode = PatternMode::qftype;
};

struct IndiscResult {
    bool indiscernible = true;
    // On failure: two index tuples of equal type whose image patterns differ,
    // minimal in (arity, lexicographic) order.
    std::vector<int> first;
    std::vector<int> second;
};

/// Checks: equal quantifier-free types of index tuples (up to length n_max,
/// default |index|) force equal image patterns. Tuples with repeated entries
/// add nothing because the equality partition is part of the type, so only
/// tuples of distinct indices are scanned.
IndiscResult is_indiscernible(const IndexedSequence& s, int n_max = 0);

/// The image pattern of one index tuple, as a comparable byte string.
std::string sequence_pattern(const IndexedSequence& s, const AutomorphismGroup& aut,
                             const std::vector<int>& idx_tuple);

struct CollapseOptions {
    int n_max = 0;           // tuple-length cap for both checks (0 = |index|)
    int k = 1;
    int sort = 0;
    PatternMode mode = PatternMode::qftype;
    std::uint64_t budget = 1ull << 22; // exhaustive map-space cap
    std::uint64_t samples = 0;         // >0 switches to sampling
    std::uint64_t seed = 0;
    int threads = 1;
    std::size_t max_witnesses = 4;
};

struct CollapseReport {
    bool exhaustive = true;
    std::uint64_t scanned = 0;
    std::uint64_t indiscernible_count = 0;
    std::uint64_t uncollapsed_count = 0;
    bool collapses = true; // no witness at this scale
    // Lexicographically least uncollapsed maps, index element -> k-tuple.
    std::vector<std::vector<std::vector<int>>> witnesses;
};

/// Scans maps index -> target^k; among the index-indiscernible ones, counts
/// those that fail indiscernibility over the reduct of the index.
CollapseReport collapse_scan(const Structure& index, const ReductSpec& reduct,
                             const Structure& target,
                             const CollapseOptions& opts = {});

/// Copy of m with every relation tuple containing a repeated element removed.
/// Repeat-carrying facts of the usual tree relations are recoverable from the
/// equality pattern, so type equality of tuples is unchanged.
Structure irreflexivize(const Structure& m);

/// Keeps exactly the relations of arity at most `arity` (functions dropped).
ReductSpec arity_reduct(const Signature& sig, int arity);

/// Verdict for one two-level graph on {0,1} x index (vertex = eps*n + i):
/// acceptable when it is connected once isolated vertices are set aside, or
/// contains only rungs (eps,i)-(1-eps,i), or only within-level edges.
bool two_level_graph_ok(int n, const std::vector<std::pair<int, int>>& edges);

struct ReasonableResult {
    bool reasonable = true;
    int pair_type_count = 0;
    std::uint64_t assignments_checked = 0;
    // On failure: the edge set of the first violating assignment, and the
    // defining rule as (i, j, eps0, eps1) representatives that carry an edge.
    std::vector<std::pair<int, int>> edges;
    std::vector<std::array<int, 4>> rule;
};

/// Enumerates every graph on {0,1} x index whose edges depend only on the
/// ordered pair type of the indices and the two level bits; reasonable when
/// each such graph is acceptable per two_level_graph_ok. The enumeration is
/// over type-orbit representatives; budget caps their count.
ReasonableResult is_reasonable(const Structure& index, int budget_bits = 20);

struct PrimitiveResult {
    bool primitive = true;
    std::pair<int, int> seed{-1, -1};
    std::vector<int> congruence; // class id per element when imprimitive
    unsigned long long aut_order = 1;
};

/// The automorphism group acts primitively when the invariant-closure of every
/// pair is the universal relation.
PrimitiveResult is_primitive(const Structure& index);

struct TemplateOptions {
    int max_literals = 2; // 1 = literals only, 2 = adds binary and/or
    bool include_equality = true;
    std::uint64_t budget = 50'000'000;
};

struct ConfigResult {
    bool found = false;
    std::vector<std::vector<int>> injection; // pattern element -> n-tuple
    std::vector<std::pair<std::string, std::string>> interpretation;
    std::uint64_t steps = 0;
    bool exhausted = false;
};

/// Searches for an interpretation of `pattern`'s relations as quantifier-free
/// templates over `target` plus an injection pattern -> target^n realizing
/// every relation fact and non-fact. n is 1 or 2.
ConfigResult find_configuration(const Structure& target, const Structure& pattern,
                                int n, const TemplateOptions& opts = {});

struct IpOptions {
    bool injective = false;
    std::uint64_t budget = 100'000'000;
};

struct IpResult {
    bool found = false;
    std::vector<std::vector<int>> a; // a[j][i]: row j < n, column i < d
    std::vector<int> b;              // b[mask] over subsets of [d]^n cells
    std::uint64_t grids = 0;
    bool exhausted = false;
};

/// Searches for the full independence pattern of depth d for the (n+1)-ary
/// relation `rel`: rows a^1..a^n of length d and, for every subset of the d^n
/// cells, an element b whose rel-trace over the grid is exactly that subset.
IpResult find_ip_pattern(const Structure& m, const std::string& rel, int n, int d,
                         const IpOptions& opts = {});

} // namespace fmlab
