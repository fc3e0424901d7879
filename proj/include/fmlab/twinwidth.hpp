#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmlab/structure.hpp"

namespace fmlab {

/// A graph whose edges are split into black (certain) and red (error) classes;
/// the state space of contraction sequences. Vertex ids are stable slots
/// 0..slots-1; contracted vertices are removed from the live mask. Capacity is
/// 64 slots, which covers everything the exact solver is asked to handle.
struct Trigraph {
    int slots = 0;
    std::uint64_t live = 0;
    std::vector<std::uint64_t> black; // adjacency masks, one row per slot
    std::vector<std::uint64_t> red;

    static Trigraph from_graph(const Structure& g);

    bool is_live(int v) const { return (live >> v) & 1; }
    int live_count() const;
    std::vector<int> vertices() const;
    bool black_edge(int u, int v) const { return (black[static_cast<size_t>(u)] >> v) & 1; }
    bool red_edge(int u, int v) const { return (red[static_cast<size_t>(u)] >> v) & 1; }
    int red_degree(int v) const;
    int max_red_degree() const;

    void add_black(int u, int v);
    void add_red(int u, int v);

    /// Checks symmetry, irreflexivity, disjointness of the two classes, and
    /// that no edge touches a dead slot. Throws input_error on violation.
    void validate() const;
};

/// Requires m to be a graph: one sort, exactly one binary relation, no
/// functions, with a symmetric irreflexive edge set. Throws input_error.
void require_graph(const Structure& m);

/// Builds a graph structure on n vertices with the given undirected edges.
Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::string& name = "");

/// Merges v into u. For every other live x the edge (u,x) becomes black iff
/// (u,x) and (v,x) were both black, absent iff both were absent, and red
/// otherwise (prior red included). Throws input_error on dead or equal vertices.
Trigraph contract(const Trigraph& t, int u, int v);

/// A full contraction order together with its recorded red-degree trace.
/// merges[i] = (u, v) folds v into u; red_degrees[i] is the maximum red degree
/// over live vertices after that merge; width is the maximum over steps.
struct ContractionSequence {
    std::vector<std::pair<int, int>> merges;
    std::vector<int> red_degrees;
    int width = 0;
};

/// Replays merges on a fresh trigraph built from g and returns the recomputed
/// per-step maximum red degrees. The replay applies the same contraction rule
/// step by step, so comparing the result against a recorded trace certifies it.
std::vector<int> replay_trace(const Structure& g,
                              const std::vector<std::pair<int, int>>& merges);

enum class WidthMode { exact, upper_bound };

std::string to_string(WidthMode mode);

struct TwwOptions {
    int exact_bound = 10;              // largest vertex count solved exactly
    std::uint64_t budget = 50'000'000; // search-node budget for the exact solver
    int threads = 1;
};

struct WidthResult {
    int width = 0;
    WidthMode mode = WidthMode::exact; // upper_bound = heuristic fallback
    ContractionSequence sequence;
    std::uint64_t nodes = 0;
    std::vector<std::uint64_t> nodes_per_depth; // one entry per attempted width
};

/// Greedy fallback: repeatedly merges the pair whose contraction minimizes the
/// resulting maximum red degree. The result is always labelled upper_bound.
WidthResult heuristic_width(const Structure& g);

/// Exact twin-width by iterative deepening on the width bound d = 0, 1, 2, ...
/// with forced twin contractions, a memo table keyed by canonical trigraph
/// form, and the greedy upper bound as a cap. Oversized inputs and exhausted
/// budgets fall back to the heuristic, labelled upper_bound; the certificate
/// replays to the reported width in either mode.
WidthResult twin_width(const Structure& g, const TwwOptions& opts = {});

/// Greedy twin-elimination test; true iff the graph contracts to a point
/// without ever creating a red edge, i.e. iff its twin-width is zero.
bool is_cograph(const Structure& g);

/// Graph-language lexicographic sum: vertex set is the disjoint union of the
/// ribs, one rib per spine vertex; (g,h)-(g',h') is an edge iff g != g' and
/// gg' is a spine edge, or g = g' and hh' is an edge of rib g.
Structure lex_sum_graph(const Structure& g, const std::vector<Structure>& ribs);

/// Representatives of every isomorphism class of graphs on 1..max_n vertices,
/// smaller sizes first, built by vertex extension with canonical-form
/// deduplication. Order within a size is by edge count, then edge encoding.
std::vector<Structure> graph_corpus(int max_n);

struct TransferRow {
    int spine = 0;         // index into the spine corpus
    std::vector<int> ribs; // per spine vertex, an index into the rib corpus
    int spine_width = 0;
    int max_rib_width = 0;
    int sum_width = 0;
    int excess = 0; // sum_width - max(spine_width, max_rib_width)
    std::uint64_t multiplicity = 1; // rib assignments identified by spine symmetry
};

struct TransferReport {
    std::vector<TransferRow> rows;
    bool lower_bound_ok = true; // sum_width >= max(spine_width, max_rib_width) in every row
    int max_excess = 0;
    std::uint64_t assignments = 0; // total assignments covered, multiplicities summed
};

/// For every spine graph and every assignment of rib graphs to its vertices,
/// solves the three widths exactly and records the excess of the sum width
/// over the factor maximum. Assignments equivalent under a spine automorphism
/// are reported once, with the orbit size as multiplicity. Widths are cached
/// by canonical form across rows. Throws input_error when a sum would exceed
/// opts.exact_bound and budget_error when the solver budget runs out.
TransferReport transfer_experiment(const std::vector<Structure>& corpus1,
                                   const std::vector<Structure>& corpus2,
                                   const TwwOptions& opts = {});

} // namespace fmlab
