#include "fmlab/twinwidth.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fmlab/errors.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

int Trigraph::live_count() const { return std::popcount(live); }

std::vector<int> Trigraph::vertices() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(live_count()));
    for (std::uint64_t m = live; m;) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

int Trigraph::red_degree(int v) const { return std::popcount(red[static_cast<size_t>(v)]); }

int Trigraph::max_red_degree() const {
    int best = 0;
    for (std::uint64_t m = live; m;) {
        int v = std::countr_zero(m);
        m &= m - 1;
        best = std::max(best, red_degree(v));
    }
    return best;
}

void Trigraph::add_black(int u, int v) {
    if (u == v) throw input_error("trigraph: no self-loops");
    if (!is_live(u) || !is_live(v)) throw input_error("trigraph: edge touches a dead slot");
    black[static_cast<size_t>(u)] |= 1ull << v;
    black[static_cast<size_t>(v)] |= 1ull << u;
}

void Trigraph::add_red(int u, int v) {
    if (u == v) throw input_error("trigraph: no self-loops");
    if (!is_live(u) || !is_live(v)) throw input_error("trigraph: edge touches a dead slot");
    red[static_cast<size_t>(u)] |= 1ull << v;
    red[static_cast<size_t>(v)] |= 1ull << u;
}

void Trigraph::validate() const {
    if (slots < 0 || slots > 64) throw input_error("trigraph: slot count out of range");
    if (static_cast<int>(black.size()) != slots || static_cast<int>(red.size()) != slots)
        throw input_error("trigraph: adjacency row count does not match slots");
    std::uint64_t slot_mask = slots == 64 ? ~0ull : (1ull << slots) - 1;
    if (live & ~slot_mask) throw input_error("trigraph: live mask exceeds slots");
    for (int v = 0; v < slots; ++v) {
        std::uint64_t b = black[static_cast<size_t>(v)];
        std::uint64_t r = red[static_cast<size_t>(v)];
        if ((b >> v) & 1) throw input_error("trigraph: black loop at " + std::to_string(v));
        if ((r >> v) & 1) throw input_error("trigraph: red loop at " + std::to_string(v));
        if (b & r) throw input_error("trigraph: black and red overlap at " + std::to_string(v));
        if ((b | r) & ~live)
            throw input_error("trigraph: edge touches a dead slot at " + std::to_string(v));
        if (!is_live(v) && (b | r))
            throw input_error("trigraph: dead slot " + std::to_string(v) + " has edges");
        for (std::uint64_t m = b; m;) {
            int u = std::countr_zero(m);
            m &= m - 1;
            if (!black_edge(u, v)) throw input_error("trigraph: black edges are not symmetric");
        }
        for (std::uint64_t m = r; m;) {
            int u = std::countr_zero(m);
            m &= m - 1;
            if (!red_edge(u, v)) throw input_error("trigraph: red edges are not symmetric");
        }
    }
}

void require_graph(const Structure& m) {
    const Signature& sig = m.signature();
    if (sig.sort_count() != 1 || sig.relation_count() != 1 || sig.function_count() != 0 ||
        sig.relations()[0].arity != 2)
        throw input_error(
            "expected a graph: one sort, one binary relation symbol, no functions; got " +
            (m.name().empty() ? std::string("unnamed structure") : m.name()));
    for (const auto& t : m.tuples(0)) {
        if (t[0] == t[1])
            throw input_error("graph has a loop at element " + std::to_string(t[0]));
        if (!m.holds(0, {t[1], t[0]}))
            throw input_error("graph edge set is not symmetric: missing (" +
                              std::to_string(t[1]) + "," + std::to_string(t[0]) + ")");
    }
}

Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::string& name) {
    Signature sig = Signature::single_sorted({rel_symbol("E", 2)});
    Structure g(sig, {n}, name);
    g.set_hyperedge_flag(0, true);
    for (auto [u, v] : edges) {
        if (u == v) throw input_error("make_graph: loop at vertex " + std::to_string(u));
        g.add_tuple(0, {u, v});
        g.add_tuple(0, {v, u});
    }
    return g;
}

Trigraph Trigraph::from_graph(const Structure& g) {
    require_graph(g);
    int n = g.sort_size(0);
    if (n > 64)
        throw input_error("trigraph capacity is 64 vertices, got " + std::to_string(n));
    Trigraph t;
    t.slots = n;
    t.live = n == 64 ? ~0ull : (1ull << n) - 1;
    t.black.assign(static_cast<size_t>(n), 0);
    t.red.assign(static_cast<size_t>(n), 0);
    for (const auto& e : g.tuples(0)) t.black[static_cast<size_t>(e[0])] |= 1ull << e[1];
    return t;
}

Trigraph contract(const Trigraph& t, int u, int v) {
    if (u == v) throw input_error("contract: vertices coincide at " + std::to_string(u));
    if (u < 0 || v < 0 || u >= t.slots || v >= t.slots || !t.is_live(u) || !t.is_live(v))
        throw input_error("contract: dead or out-of-range vertex in (" + std::to_string(u) +
                          "," + std::to_string(v) + ")");
    Trigraph out = t;
    std::uint64_t um = 1ull << u;
    std::uint64_t vm = 1ull << v;
    std::uint64_t rest = t.live & ~um & ~vm;
    std::uint64_t both_black = t.black[static_cast<size_t>(u)] & t.black[static_cast<size_t>(v)] & rest;
    std::uint64_t any = (t.black[static_cast<size_t>(u)] | t.black[static_cast<size_t>(v)] |
                         t.red[static_cast<size_t>(u)] | t.red[static_cast<size_t>(v)]) &
                        rest;
    std::uint64_t new_red = any & ~both_black;
    out.live &= ~vm;
    out.black[static_cast<size_t>(u)] = both_black;
    out.red[static_cast<size_t>(u)] = new_red;
    out.black[static_cast<size_t>(v)] = 0;
    out.red[static_cast<size_t>(v)] = 0;
    for (std::uint64_t m = rest; m;) {
        int x = std::countr_zero(m);
        m &= m - 1;
        out.black[static_cast<size_t>(x)] &= ~(um | vm);
        out.red[static_cast<size_t>(x)] &= ~(um | vm);
        if ((both_black >> x) & 1) out.black[static_cast<size_t>(x)] |= um;
        else if ((new_red >> x) & 1) out.red[static_cast<size_t>(x)] |= um;
    }
    return out;
}

std::vector<int> replay_trace(const Structure& g,
                              const std::vector<std::pair<int, int>>& merges) {
    Trigraph t = Trigraph::from_graph(g);
    std::vector<int> trace;
    trace.reserve(merges.size());
    for (auto [u, v] : merges) {
        t = contract(t, u, v);
        trace.push_back(t.max_red_degree());
    }
    return trace;
}

std::string to_string(WidthMode mode) {
    return mode == WidthMode::exact ? "exact" : "upper_bound";
}

namespace {

struct budget_hit {};

std::string state_key(const Trigraph& t) {
    std::string s;
    s.reserve(8 + 16 * static_cast<size_t>(t.live_count()));
    auto put = [&s](std::uint64_t w) {
        for (int b = 0; b < 8; ++b) s.push_back(static_cast<char>(w >> (8 * b)));
    };
    put(t.live);
    for (int v = 0; v < t.slots; ++v)
        if (t.is_live(v)) {
            put(t.black[static_cast<size_t>(v)]);
            put(t.red[static_cast<size_t>(v)]);
        }
    return s;
}

/// Live part of the trigraph as a two-relation structure, for canonical keys.
Structure state_structure(const Trigraph& t) {
    static const Signature sig =
        Signature::single_sorted({rel_symbol("black", 2), rel_symbol("red", 2)});
    auto vs = t.vertices();
    Structure s(sig, {static_cast<int>(vs.size())});
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
            int a = static_cast<int>(i);
            int b = static_cast<int>(j);
            if (t.black_edge(vs[i], vs[j])) {
                s.add_tuple(0, {a, b});
                s.add_tuple(0, {b, a});
            } else if (t.red_edge(vs[i], vs[j])) {
                s.add_tuple(1, {a, b});
                s.add_tuple(1, {b, a});
            }
        }
    return s;
}

/// Contracting a pair with identical black and red adjacency to the rest never
/// raises any red degree, so such merges are applied greedily before branching.
Trigraph force_twins(Trigraph t, std::vector<std::pair<int, int>>* path) {
    bool again = true;
    while (again && t.live_count() > 1) {
        again = false;
        auto vs = t.vertices();
        for (size_t i = 0; i < vs.size() && !again; ++i)
            for (size_t j = i + 1; j < vs.size() && !again; ++j) {
                int u = vs[i];
                int v = vs[j];
                std::uint64_t rest = t.live & ~(1ull << u) & ~(1ull << v);
                if ((t.black[static_cast<size_t>(u)] & rest) ==
                        (t.black[static_cast<size_t>(v)] & rest) &&
                    (t.red[static_cast<size_t>(u)] & rest) ==
                        (t.red[static_cast<size_t>(v)] & rest)) {
                    t = contract(t, u, v);
                    if (path) path->emplace_back(u, v);
                    again = true;
                }
            }
    }
    return t;
}

/// Depth-first completion search under a fixed width bound. Failed states are
/// memoized twice: by exact labelling (cheap) and by canonical form (catches
/// isomorphic states reached along different merge orders). Memo hits only
/// ever skip genuinely failed subtrees, so the first witness found is the
/// lexicographically least one regardless of memo contents.
struct DepthSearch {
    int d = 0;
    std::uint64_t budget = 0;
    std::uint64_t nodes = 0;
    std::unordered_set<std::string> failed;
    std::unordered_set<std::string> failed_canon;
    std::vector<std::pair<int, int>> path;

    bool run(const Trigraph& start) {
        if (++nodes > budget) throw budget_hit{};
        size_t mark = path.size();
        Trigraph t = force_twins(start, &path);
        if (t.live_count() <= 1) return true;
        std::string key = state_key(t);
        if (failed.count(key)) {
            path.resize(mark);
            return false;
        }
        std::string canon;
        try {
            canon = canonical_key(state_structure(t));
        } catch (const budget_error&) {
            // canonicalization is an optimization; fall back to labelled memo only
        }
        if (!canon.empty() && failed_canon.count(canon)) {
            failed.insert(std::move(key));
            path.resize(mark);
            return false;
        }
        auto vs = t.vertices();
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) {
                Trigraph child = contract(t, vs[i], vs[j]);
                if (child.max_red_degree() > d) continue;
                path.emplace_back(vs[i], vs[j]);
                if (run(child)) return true;
                path.pop_back();
            }
        failed.insert(std::move(key));
        if (!canon.empty()) failed_canon.insert(std::move(canon));
        path.resize(mark);
        return false;
    }
};

/// One iterative-deepening level. With several threads the branching splits
/// over root merges; every task runs to completion so that node counts and the
/// winning certificate depend only on the inputs and the thread count.
bool search_depth(const Trigraph& root, int d, const TwwOptions& opts, std::uint64_t& used,
                  std::vector<std::uint64_t>& per_depth,
                  std::vector<std::pair<int, int>>& witness) {
    if (opts.threads <= 1) {
        DepthSearch s;
        s.d = d;
        s.budget = opts.budget > used ? opts.budget - used : 0;
        bool ok = false;
        try {
            ok = s.run(root);
        } catch (const budget_hit&) {
            used += s.nodes;
            per_depth.push_back(s.nodes);
            throw;
        }
        used += s.nodes;
        per_depth.push_back(s.nodes);
        if (ok) witness = std::move(s.path);
        return ok;
    }
    std::vector<std::pair<int, int>> prefix;
    Trigraph t = force_twins(root, &prefix);
    if (t.live_count() <= 1) {
        used += 1;
        per_depth.push_back(1);
        witness = std::move(prefix);
        return true;
    }
    auto vs = t.vertices();
    std::vector<std::pair<int, int>> roots;
    std::vector<Trigraph> children;
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
            Trigraph child = contract(t, vs[i], vs[j]);
            if (child.max_red_degree() > d) continue;
            roots.emplace_back(vs[i], vs[j]);
            children.push_back(std::move(child));
        }
    if (children.empty()) {
        used += 1;
        per_depth.push_back(1);
        return false;
    }
    struct Part {
        bool ok = false;
        bool hit = false;
        std::uint64_t nodes = 0;
        std::vector<std::pair<int, int>> path;
    };
    std::vector<Part> parts(children.size());
    parallel_for(static_cast<int>(children.size()), opts.threads, [&](int i) {
        DepthSearch s;
        s.d = d;
        s.budget = opts.budget;
        try {
            parts[static_cast<size_t>(i)].ok = s.run(children[static_cast<size_t>(i)]);
        } catch (const budget_hit&) {
            parts[static_cast<size_t>(i)].hit = true;
        }
        parts[static_cast<size_t>(i)].nodes = s.nodes;
        if (parts[static_cast<size_t>(i)].ok)
            parts[static_cast<size_t>(i)].path = std::move(s.path);
    });
    std::uint64_t level = 1;
    bool hit = false;
    int win = -1;
    for (size_t i = 0; i < parts.size(); ++i) {
        level += parts[i].nodes;
        hit = hit || parts[i].hit;
        if (parts[i].ok && win < 0) win = static_cast<int>(i);
    }
    used += level;
    per_depth.push_back(level);
    if (win >= 0) {
        witness = std::move(prefix);
        witness.push_back(roots[static_cast<size_t>(win)]);
        auto& tail = parts[static_cast<size_t>(win)].path;
        witness.insert(witness.end(), tail.begin(), tail.end());
        return true;
    }
    if (hit) throw budget_hit{};
    return false;
}

} // namespace

WidthResult heuristic_width(const Structure& g) {
    Trigraph t = Trigraph::from_graph(g);
    WidthResult res;
    res.mode = WidthMode::upper_bound;
    int width = 0;
    while (t.live_count() > 1) {
        auto vs = t.vertices();
        int best_max = INT_MAX;
        int best_deg = INT_MAX;
        std::pair<int, int> best_pair{-1, -1};
        Trigraph best;
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) {
                Trigraph c = contract(t, vs[i], vs[j]);
                int m = c.max_red_degree();
                int deg = c.red_degree(vs[i]);
                if (m < best_max || (m == best_max && deg < best_deg)) {
                    best_max = m;
                    best_deg = deg;
                    best_pair = {vs[i], vs[j]};
                    best = std::move(c);
                }
            }
        t = std::move(best);
        res.sequence.merges.push_back(best_pair);
        res.sequence.red_degrees.push_back(best_max);
        width = std::max(width, best_max);
    }
    res.sequence.width = width;
    res.width = width;
    return res;
}

WidthResult twin_width(const Structure& g, const TwwOptions& opts) {
    WidthResult greedy = heuristic_width(g);
    int n = g.sort_size(0);
    if (n > opts.exact_bound) return greedy;
    Trigraph root = Trigraph::from_graph(g);
    WidthResult res;
    res.mode = WidthMode::exact;
    std::uint64_t used = 0;
    std::vector<std::uint64_t> per_depth;
    for (int d = 0;; ++d) {
        if (d >= greedy.width) {
            // every level below the greedy bound was exhausted, so the greedy
            // sequence is optimal and serves as the certificate
            res.width = greedy.width;
            res.sequence = greedy.sequence;
            break;
        }
        bool ok = false;
        std::vector<std::pair<int, int>> witness;
        try {
            ok = search_depth(root, d, opts, used, per_depth, witness);
        } catch (const budget_hit&) {
            greedy.nodes = used;
            greedy.nodes_per_depth = per_depth;
            return greedy;
        }
        if (ok) {
            res.width = d;
            res.sequence.merges = std::move(witness);
            break;
        }
    }
    res.sequence.red_degrees = replay_trace(g, res.sequence.merges);
    int w = 0;
    for (int x : res.sequence.red_degrees) w = std::max(w, x);
    res.sequence.width = w;
    res.width = w;
    res.nodes = used;
    res.nodes_per_depth = std::move(per_depth);
    return res;
}

bool is_cograph(const Structure& g) {
    Trigraph t = force_twins(Trigraph::from_graph(g), nullptr);
    return t.live_count() <= 1;
}

Structure lex_sum_graph(const Structure& g, const std::vector<Structure>& ribs) {
    require_graph(g);
    int n = g.sort_size(0);
    if (static_cast<int>(ribs.size()) != n)
        throw input_error("lex_sum_graph: expected " + std::to_string(n) + " ribs, got " +
                          std::to_string(ribs.size()));
    std::vector<int> offset(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
        require_graph(ribs[static_cast<size_t>(i)]);
        if (ribs[static_cast<size_t>(i)].sort_size(0) == 0)
            throw input_error("lex_sum_graph: rib " + std::to_string(i) + " is empty");
        offset[static_cast<size_t>(i) + 1] =
            offset[static_cast<size_t>(i)] + ribs[static_cast<size_t>(i)].sort_size(0);
    }
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
        for (const auto& e : ribs[static_cast<size_t>(a)].tuples(0))
            if (e[0] < e[1])
                edges.emplace_back(offset[static_cast<size_t>(a)] + e[0],
                                   offset[static_cast<size_t>(a)] + e[1]);
        for (int b = a + 1; b < n; ++b) {
            if (!g.holds(0, {a, b})) continue;
            for (int x = 0; x < ribs[static_cast<size_t>(a)].sort_size(0); ++x)
                for (int y = 0; y < ribs[static_cast<size_t>(b)].sort_size(0); ++y)
                    edges.emplace_back(offset[static_cast<size_t>(a)] + x,
                                       offset[static_cast<size_t>(b)] + y);
        }
    }
    return make_graph(offset[static_cast<size_t>(n)], edges,
                      g.name().empty() ? "lex_sum" : g.name() + "[...]");
}

namespace {

int pair_bit(int i, int j) { return j * (j - 1) / 2 + i; } // requires i < j

std::vector<std::pair<int, int>> mask_edges(int n, std::uint64_t mask) {
    std::vector<std::pair<int, int>> out;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if ((mask >> pair_bit(i, j)) & 1) out.emplace_back(i, j);
    return out;
}

} // namespace

std::vector<Structure> graph_corpus(int max_n) {
    if (max_n < 1 || max_n > 8)
        throw input_error("graph_corpus enumerates 1..8 vertices, got " +
                          std::to_string(max_n));
    std::vector<Structure> out;
    std::vector<std::uint64_t> level = {0};
    for (int n = 1; n <= max_n; ++n) {
        if (n > 1) {
            // extend every (n-1)-vertex representative by one vertex with every
            // possible neighbourhood, then deduplicate up to isomorphism
            std::map<std::string, std::uint64_t> classes;
            int base = pair_bit(0, n - 1);
            for (std::uint64_t parent : level)
                for (std::uint64_t s = 0; s < (1ull << (n - 1)); ++s) {
                    std::uint64_t mask = parent;
                    for (int i = 0; i < n - 1; ++i)
                        if ((s >> i) & 1) mask |= 1ull << (base + i);
                    std::string key = canonical_key(make_graph(n, mask_edges(n, mask)));
                    auto it = classes.find(key);
                    if (it == classes.end()) classes.emplace(std::move(key), mask);
                    else it->second = std::min(it->second, mask);
                }
            level.clear();
            for (const auto& [key, mask] : classes) level.push_back(mask);
            std::sort(level.begin(), level.end(), [](std::uint64_t a, std::uint64_t b) {
                int ca = std::popcount(a);
                int cb = std::popcount(b);
                return ca != cb ? ca < cb : a < b;
            });
        }
        for (size_t i = 0; i < level.size(); ++i)
            out.push_back(make_graph(n, mask_edges(n, level[i]),
                                     "g" + std::to_string(n) + "_" + std::to_string(i)));
    }
    return out;
}

namespace {

/// Every automorphism of a single-sorted structure, by closing the generator
/// set; used to pick one rib assignment per spine-symmetry orbit.
std::vector<std::vector<int>> all_automorphisms(const Structure& g) {
    AutomorphismGroup grp = automorphism_group(g);
    int n = g.sort_size(0);
    std::vector<int> id(static_cast<size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<int>> seen = {id};
    std::vector<std::vector<int>> queue = {id};
    for (size_t q = 0; q < queue.size(); ++q)
        for (const auto& gen : grp.generators) {
            std::vector<int> comp(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                comp[static_cast<size_t>(i)] =
                    gen.map[0][static_cast<size_t>(queue[q][static_cast<size_t>(i)])];
            if (seen.insert(comp).second) queue.push_back(comp);
        }
    return queue;
}

} // namespace

TransferReport transfer_experiment(const std::vector<Structure>& corpus1,
                                   const std::vector<Structure>& corpus2,
                                   const TwwOptions& opts) {
    if (corpus1.empty() || corpus2.empty())
        throw input_error("transfer_experiment: both corpora must be nonempty");
    for (const auto& g : corpus1) require_graph(g);
    for (const auto& h : corpus2) require_graph(h);
    int r2 = static_cast<int>(corpus2.size());

    TransferReport report;
    for (int gi = 0; gi < static_cast<int>(corpus1.size()); ++gi) {
        const Structure& spine = corpus1[static_cast<size_t>(gi)];
        int n = spine.sort_size(0);
        auto perms = all_automorphisms(spine);
        std::vector<int> ranges(static_cast<size_t>(n), r2);
        for_each_tuple(ranges, [&](const std::vector<int>& a) {
            std::vector<int> image(static_cast<size_t>(n));
            std::uint64_t stab = 0;
            bool least = true;
            for (const auto& p : perms) {
                for (int i = 0; i < n; ++i)
                    image[static_cast<size_t>(i)] = a[static_cast<size_t>(p[static_cast<size_t>(i)])];
                if (image < a) {
                    least = false;
                    break;
                }
                if (image == a) ++stab;
            }
            if (!least) return true;
            TransferRow row;
            row.spine = gi;
            row.ribs = a;
            row.multiplicity = perms.size() / stab;
            int total = 0;
            for (int i = 0; i < n; ++i)
                total += corpus2[static_cast<size_t>(a[static_cast<size_t>(i)])].sort_size(0);
            if (total > opts.exact_bound)
                throw input_error("transfer_experiment: sum of " + std::to_string(total) +
                                  " vertices exceeds exact_bound " +
                                  std::to_string(opts.exact_bound));
            report.rows.push_back(std::move(row));
            return true;
        });
    }

    std::mutex mu;
    std::map<std::string, int> widths;
    TwwOptions inner = opts;
    inner.threads = 1;
    auto width_of = [&](const Structure& s) {
        std::string key = canonical_key(s);
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = widths.find(key);
            if (it != widths.end()) return it->second;
        }
        WidthResult r = twin_width(s, inner);
        if (r.mode != WidthMode::exact)
            throw budget_error("transfer_experiment: solver budget exhausted on a " +
                               std::to_string(s.sort_size(0)) + "-vertex sum");
        std::lock_guard<std::mutex> lock(mu);
        widths.emplace(std::move(key), r.width);
        return r.width;
    };

    std::vector<std::exception_ptr> failures(report.rows.size());
    parallel_for(static_cast<int>(report.rows.size()), opts.threads, [&](int i) {
        TransferRow& row = report.rows[static_cast<size_t>(i)];
        try {
            const Structure& spine = corpus1[static_cast<size_t>(row.spine)];
            std::vector<Structure> ribs;
            ribs.reserve(row.ribs.size());
            int max_rib = 0;
            for (int idx : row.ribs) {
                ribs.push_back(corpus2[static_cast<size_t>(idx)]);
                max_rib = std::max(max_rib, width_of(corpus2[static_cast<size_t>(idx)]));
            }
            row.spine_width = width_of(spine);
            row.max_rib_width = max_rib;
            row.sum_width = width_of(lex_sum_graph(spine, ribs));
            row.excess = row.sum_width - std::max(row.spine_width, row.max_rib_width);
        } catch (...) {
            failures[static_cast<size_t>(i)] = std::current_exception();
        }
    });
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    for (const auto& row : report.rows) {
        report.lower_bound_ok = report.lower_bound_ok && row.excess >= 0;
        report.max_excess = std::max(report.max_excess, row.excess);
        report.assignments += row.multiplicity;
    }
    return report;
}

} // namespace fmlab
