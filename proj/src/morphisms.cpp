#include "fmlab/morphisms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "fmlab/errors.hpp"

namespace fmlab {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct GlobalIndex {
    std::vector<int> offset;
    int total = 0;

    explicit GlobalIndex(const Structure& m) {
        offset.resize(m.sort_sizes().size());
        for (size_t s = 0; s < offset.size(); ++s) {
            offset[s] = total;
            total += m.sort_sizes()[s];
        }
    }
    int global(int sort, int elem) const { return offset[static_cast<size_t>(sort)] + elem; }
};

// Iso-invariant stable colouring: sorts first, then rounds of relation- and
// function-neighbourhood codes until the class count stops growing. Colour ids
// are ranks in a deterministic order, so they are comparable across
// isomorphic structures.
std::vector<int> stable_colouring(const Structure& m, std::vector<int> colour) {
    const Signature& sig = m.signature();
    GlobalIndex gi(m);
    int n = gi.total;
    if (n == 0) return colour;

    std::vector<std::vector<std::uint64_t>> codes(static_cast<size_t>(n));
    int classes = static_cast<int>(std::set<int>(colour.begin(), colour.end()).size());
    for (int round = 0; round < n; ++round) {
        for (auto& c : codes) c.clear();
        for (int r = 0; r < sig.relation_count(); ++r) {
            const auto& sym = sig.relations()[static_cast<size_t>(r)];
            for (const auto& t : m.tuples(r)) {
                std::uint64_t base = mix64(static_cast<std::uint64_t>(r) + 1);
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.sorts[static_cast<size_t>(i)], t[static_cast<size_t>(i)]);
                    base = mix64(base ^ static_cast<std::uint64_t>(colour[static_cast<size_t>(g)] + 1));
                }
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.sorts[static_cast<size_t>(i)], t[static_cast<size_t>(i)]);
                    codes[static_cast<size_t>(g)].push_back(mix64(base ^ (static_cast<std::uint64_t>(i) << 32)));
                }
            }
        }
        for (int f = 0; f < sig.function_count(); ++f) {
            const auto& sym = sig.functions()[static_cast<size_t>(f)];
            std::vector<int> ranges;
            for (int s : sym.arg_sorts) ranges.push_back(m.sort_size(s));
            for_each_tuple(ranges, [&](const std::vector<int>& args) {
                int v = m.function_value(f, args);
                std::uint64_t base = mix64(0x0f00du ^ (static_cast<std::uint64_t>(f) + 1));
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.arg_sorts[static_cast<size_t>(i)], args[static_cast<size_t>(i)]);
                    base = mix64(base ^ static_cast<std::uint64_t>(colour[static_cast<size_t>(g)] + 1));
                }
                std::uint64_t vcode = v == undet
                                          ? 0xffffu
                                          : static_cast<std::uint64_t>(
                                                colour[static_cast<size_t>(gi.global(sym.result_sort, v))] + 1);
                base = mix64(base ^ (vcode << 16));
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.arg_sorts[static_cast<size_t>(i)], args[static_cast<size_t>(i)]);
                    codes[static_cast<size_t>(g)].push_back(mix64(base ^ (static_cast<std::uint64_t>(i) << 40)));
                }
                if (v != undet) {
                    int g = gi.global(sym.result_sort, v);
                    codes[static_cast<size_t>(g)].push_back(mix64(base ^ (0x7full << 40)));
                }
                return true;
            });
        }
        for (auto& c : codes) std::sort(c.begin(), c.end());

        std::vector<int> idx(static_cast<size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        auto less = [&](int x, int y) {
            if (colour[static_cast<size_t>(x)] != colour[static_cast<size_t>(y)])
                return colour[static_cast<size_t>(x)] < colour[static_cast<size_t>(y)];
            return codes[static_cast<size_t>(x)] < codes[static_cast<size_t>(y)];
        };
        std::sort(idx.begin(), idx.end(), less);
        std::vector<int> next(static_cast<size_t>(n));
        int rank = 0;
        for (int i = 0; i < n; ++i) {
            if (i > 0 && less(idx[static_cast<size_t>(i - 1)], idx[static_cast<size_t>(i)])) ++rank;
            next[static_cast<size_t>(idx[static_cast<size_t>(i)])] = rank;
        }
        int next_classes = rank + 1;
        colour.swap(next);
        if (next_classes == classes) break;
        classes = next_classes;
    }
    return colour;
}

std::vector<int> initial_colouring(const Structure& m) {
    GlobalIndex gi(m);
    std::vector<int> colour(static_cast<size_t>(gi.total));
    for (size_t s = 0; s < m.sort_sizes().size(); ++s)
        for (int e = 0; e < m.sort_sizes()[s]; ++e)
            colour[static_cast<size_t>(gi.global(static_cast<int>(s), e))] = static_cast<int>(s);
    return colour;
}

// ---------------------------------------------------------------------------
// Embedding search

struct EmbeddingSearch {
    const Structure& a;
    const Structure& c;
    Embedding emb;
    std::vector<std::vector<char>> used;              // per sort, target ids taken
    std::vector<std::vector<int>> assigned_by_sort;   // source ids assigned, per sort
    std::vector<std::pair<int, int>> order;           // unassigned source elements
    std::function<bool(const Embedding&)> sink;       // false stops the search
    bool done = false;

    EmbeddingSearch(const Structure& a_, const Structure& c_) : a(a_), c(c_) {
        if (a.signature() != c.signature())
            throw input_error("embedding endpoints must share a signature");
        size_t sorts = a.sort_sizes().size();
        emb.map.resize(sorts);
        used.resize(sorts);
        assigned_by_sort.resize(sorts);
        for (size_t s = 0; s < sorts; ++s) {
            emb.map[s].assign(static_cast<size_t>(a.sort_sizes()[s]), -1);
            used[s].assign(static_cast<size_t>(c.sort_sizes()[s]), 0);
        }
    }

    // Checks relation facts biconditionally over assigned elements, looking at
    // tuples that involve the newly assigned (sort, elem).
    bool consistent_after(int sort, int elem) {
        const Signature& sig = a.signature();
        for (int r = 0; r < sig.relation_count(); ++r) {
            const auto& sym = sig.relations()[static_cast<size_t>(r)];
            for (int p = 0; p < sym.arity; ++p) {
                if (sym.sorts[static_cast<size_t>(p)] != sort) continue;
                std::vector<int> ranges;
                for (int i = 0; i < sym.arity; ++i) {
                    if (i == p)
                        ranges.push_back(1);
                    else
                        ranges.push_back(static_cast<int>(
                            assigned_by_sort[static_cast<size_t>(sym.sorts[static_cast<size_t>(i)])].size()));
                }
                std::vector<int> src(static_cast<size_t>(sym.arity));
                std::vector<int> img(static_cast<size_t>(sym.arity));
                bool ok = for_each_tuple(ranges, [&](const std::vector<int>& pick) {
                    for (int i = 0; i < sym.arity; ++i) {
                        int s_i = sym.sorts[static_cast<size_t>(i)];
                        int e_i = i == p ? elem
                                         : assigned_by_sort[static_cast<size_t>(s_i)]
                                                           [static_cast<size_t>(pick[static_cast<size_t>(i)])];
                        src[static_cast<size_t>(i)] = e_i;
                        img[static_cast<size_t>(i)] = emb.map[static_cast<size_t>(s_i)][static_cast<size_t>(e_i)];
                    }
                    return a.holds(r, src) == c.holds(r, img);
                });
                if (!ok) return false;
            }
        }
        return true;
    }

    bool functions_ok() {
        const Signature& sig = a.signature();
        for (int f = 0; f < sig.function_count(); ++f) {
            const auto& sym = sig.functions()[static_cast<size_t>(f)];
            std::vector<int> ranges;
            for (int s : sym.arg_sorts) ranges.push_back(a.sort_size(s));
            std::vector<int> img(static_cast<size_t>(sym.arity));
            bool ok = for_each_tuple(ranges, [&](const std::vector<int>& args) {
                for (int i = 0; i < sym.arity; ++i) {
                    int s_i = sym.arg_sorts[static_cast<size_t>(i)];
                    img[static_cast<size_t>(i)] =
                        emb.map[static_cast<size_t>(s_i)][static_cast<size_t>(args[static_cast<size_t>(i)])];
                }
                int va = a.function_value(f, args);
                int vc = c.function_value(f, img);
                int expect = va == undet
                                 ? undet
                                 : emb.map[static_cast<size_t>(sym.result_sort)][static_cast<size_t>(va)];
                return vc == expect;
            });
            if (!ok) return false;
        }
        return true;
    }

    void assign(int sort, int elem, int target) {
        emb.map[static_cast<size_t>(sort)][static_cast<size_t>(elem)] = target;
        used[static_cast<size_t>(sort)][static_cast<size_t>(target)] = 1;
        assigned_by_sort[static_cast<size_t>(sort)].push_back(elem);
    }

    void unassign(int sort, int elem, int target) {
        emb.map[static_cast<size_t>(sort)][static_cast<size_t>(elem)] = -1;
        used[static_cast<size_t>(sort)][static_cast<size_t>(target)] = 0;
        assigned_by_sort[static_cast<size_t>(sort)].pop_back();
    }

    // Seeds the search from a partial map, re-checking its internal consistency.
    bool seed(const Embedding& partial) {
        for (size_t s = 0; s < partial.map.size(); ++s) {
            for (size_t e = 0; e < partial.map[s].size(); ++e) {
                int t = partial.map[s][e];
                if (t < 0) continue;
                if (t >= c.sort_size(static_cast<int>(s)) || used[s][static_cast<size_t>(t)]) return false;
                assign(static_cast<int>(s), static_cast<int>(e), t);
                if (!consistent_after(static_cast<int>(s), static_cast<int>(e))) return false;
            }
        }
        for (size_t s = 0; s < emb.map.size(); ++s)
            for (size_t e = 0; e < emb.map[s].size(); ++e)
                if (emb.map[s][e] < 0) order.emplace_back(static_cast<int>(s), static_cast<int>(e));
        return true;
    }

    void run(size_t pos) {
        if (done) return;
        if (pos == order.size()) {
            if (functions_ok() && !sink(emb)) done = true;
            return;
        }
        auto [sort, elem] = order[pos];
        for (int t = 0; t < c.sort_size(sort); ++t) {
            if (used[static_cast<size_t>(sort)][static_cast<size_t>(t)]) continue;
            assign(sort, elem, t);
            if (consistent_after(sort, elem)) run(pos + 1);
            unassign(sort, elem, t);
            if (done) return;
        }
    }
};

Embedding empty_partial(const Structure& a) {
    Embedding e;
    e.map.resize(a.sort_sizes().size());
    for (size_t s = 0; s < e.map.size(); ++s)
        e.map[s].assign(static_cast<size_t>(a.sort_sizes()[s]), -1);
    return e;
}

} // namespace

std::vector<Embedding> enumerate_embeddings(const Structure& a, const Structure& c,
                                            std::size_t budget) {
    EmbeddingSearch search(a, c);
    std::vector<Embedding> out;
    search.sink = [&](const Embedding& e) {
        out.push_back(e);
        if (budget != 0 && out.size() > budget)
            throw budget_error("embedding enumeration exceeded budget of " +
                               std::to_string(budget));
        return true;
    };
    if (search.seed(empty_partial(a))) search.run(0);
    return out;
}

std::optional<Embedding> find_embedding(const Structure& a, const Structure& c,
                                        const Embedding& partial) {
    EmbeddingSearch search(a, c);
    std::optional<Embedding> found;
    search.sink = [&](const Embedding& e) {
        found = e;
        return false;
    };
    if (search.seed(partial)) search.run(0);
    return found;
}

std::optional<Embedding> are_isomorphic(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature()) throw input_error("isomorphism test needs one signature");
    if (a.sort_sizes() != b.sort_sizes()) return std::nullopt;
    for (int r = 0; r < a.signature().relation_count(); ++r)
        if (a.tuple_count(r) != b.tuple_count(r)) return std::nullopt;
    {
        auto ca = stable_colouring(a, initial_colouring(a));
        auto cb = stable_colouring(b, initial_colouring(b));
        std::sort(ca.begin(), ca.end());
        std::sort(cb.begin(), cb.end());
        if (ca != cb) return std::nullopt;
    }
    return find_embedding(a, b, empty_partial(a));
}

AutomorphismGroup automorphism_group(const Structure& m) {
    AutomorphismGroup g;
    Embedding fixed = empty_partial(m);
    for (size_t s = 0; s < m.sort_sizes().size(); ++s) {
        for (int b = 0; b < m.sort_sizes()[s]; ++b) {
            unsigned long long orbit = 0;
            for (int c = 0; c < m.sort_sizes()[s]; ++c) {
                Embedding partial = fixed;
                partial.map[s][static_cast<size_t>(b)] = c;
                if (auto e = find_embedding(m, m, partial)) {
                    ++orbit;
                    if (c != b) g.generators.push_back(*e);
                }
            }
            g.order *= orbit;
            fixed.map[s][static_cast<size_t>(b)] = b;
        }
    }
    return g;
}

std::vector<std::vector<int>> element_orbits(const Structure& m,
                                             const AutomorphismGroup& g) {
    std::vector<std::vector<int>> orbit(m.sort_sizes().size());
    for (size_t s = 0; s < orbit.size(); ++s) {
        orbit[s].resize(static_cast<size_t>(m.sort_sizes()[s]));
        std::iota(orbit[s].begin(), orbit[s].end(), 0);
    }
    std::function<int(std::vector<int>&, int)> find = [&](std::vector<int>& parent, int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (const auto& gen : g.generators)
        for (size_t s = 0; s < orbit.size(); ++s)
            for (size_t e = 0; e < orbit[s].size(); ++e) {
                int x = find(orbit[s], static_cast<int>(e));
                int y = find(orbit[s], gen.map[s][e]);
                if (x != y) orbit[s][static_cast<size_t>(std::max(x, y))] = std::min(x, y);
            }
    for (size_t s = 0; s < orbit.size(); ++s)
        for (size_t e = 0; e < orbit[s].size(); ++e)
            orbit[s][e] = find(orbit[s], static_cast<int>(e));
    return orbit;
}

std::vector<int> orbit_min_tuple(const AutomorphismGroup& g, int sort,
                                 const std::vector<int>& tuple) {
    std::set<std::vector<int>> seen{tuple};
    std::vector<std::vector<int>> frontier{tuple};
    std::vector<int> best = tuple;
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& t : frontier) {
            for (const auto& gen : g.generators) {
                std::vector<int> img(t.size());
                for (size_t i = 0; i < t.size(); ++i)
                    img[i] = gen.map[static_cast<size_t>(sort)][static_cast<size_t>(t[i])];
                if (seen.insert(img).second) {
                    if (img < best) best = img;
                    next.push_back(std::move(img));
                }
            }
        }
        frontier.swap(next);
    }
    return best;
}

InducedSubstructure induced_substructure(const Structure& m,
                                         std::vector<std::vector<int>> subsets,
                                         ClosurePolicy policy) {
    const Signature& sig = m.signature();
    if (subsets.size() != m.sort_sizes().size())
        throw input_error("induced substructure needs one subset per sort");
    for (size_t s = 0; s < subsets.size(); ++s) {
        std::sort(subsets[s].begin(), subsets[s].end());
        subsets[s].erase(std::unique(subsets[s].begin(), subsets[s].end()), subsets[s].end());
        for (int e : subsets[s])
            if (e < 0 || e >= m.sort_sizes()[s])
                throw input_error("substructure subset references an unknown element");
    }

    // Close under functions, or reject on the first escaping application.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int f = 0; f < sig.function_count(); ++f) {
            const auto& sym = sig.functions()[static_cast<size_t>(f)];
            std::vector<int> ranges;
            for (int s : sym.arg_sorts)
                ranges.push_back(static_cast<int>(subsets[static_cast<size_t>(s)].size()));
            std::vector<int> args(static_cast<size_t>(sym.arity));
            for_each_tuple(ranges, [&](const std::vector<int>& pick) {
                for (int i = 0; i < sym.arity; ++i)
                    args[static_cast<size_t>(i)] =
                        subsets[static_cast<size_t>(sym.arg_sorts[static_cast<size_t>(i)])]
                               [static_cast<size_t>(pick[static_cast<size_t>(i)])];
                int v = m.function_value(f, args);
                if (v == undet) return true;
                auto& dst = subsets[static_cast<size_t>(sym.result_sort)];
                if (!std::binary_search(dst.begin(), dst.end(), v)) {
                    if (policy == ClosurePolicy::require) {
                        std::string app = sym.name + "(";
                        for (int i = 0; i < sym.arity; ++i)
                            app += (i ? "," : "") + std::to_string(args[static_cast<size_t>(i)]);
                        app += ") = " + std::to_string(v);
                        throw input_error("subset not closed under functions: " + app +
                                          " falls outside the subset");
                    }
                    dst.insert(std::lower_bound(dst.begin(), dst.end(), v), v);
                    changed = true;
                }
                return true;
            });
        }
    }

    InducedSubstructure out;
    out.renaming.resize(subsets.size());
    out.elements = subsets;
    std::vector<int> sizes(subsets.size());
    for (size_t s = 0; s < subsets.size(); ++s) {
        out.renaming[s].assign(static_cast<size_t>(m.sort_sizes()[s]), -1);
        for (size_t i = 0; i < subsets[s].size(); ++i)
            out.renaming[s][static_cast<size_t>(subsets[s][i])] = static_cast<int>(i);
        sizes[s] = static_cast<int>(subsets[s].size());
    }
    Structure sub(sig, sizes, m.name().empty() ? "" : m.name() + "|sub");
    for (int r = 0; r < sig.relation_count(); ++r) {
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        sub.set_hyperedge_flag(r, m.hyperedge_flag(r));
        for (const auto& t : m.tuples(r)) {
            std::vector<int> img(t.size());
            bool inside = true;
            for (int i = 0; i < sym.arity && inside; ++i) {
                int v = out.renaming[static_cast<size_t>(sym.sorts[static_cast<size_t>(i)])]
                                    [static_cast<size_t>(t[static_cast<size_t>(i)])];
                if (v < 0) inside = false;
                img[static_cast<size_t>(i)] = v;
            }
            if (inside) sub.add_tuple(r, img);
        }
    }
    for (int f = 0; f < sig.function_count(); ++f) {
        const auto& sym = sig.functions()[static_cast<size_t>(f)];
        std::vector<int> ranges;
        for (int s : sym.arg_sorts)
            ranges.push_back(static_cast<int>(subsets[static_cast<size_t>(s)].size()));
        std::vector<int> args(static_cast<size_t>(sym.arity));
        std::vector<int> sub_args(static_cast<size_t>(sym.arity));
        for_each_tuple(ranges, [&](const std::vector<int>& pick) {
            for (int i = 0; i < sym.arity; ++i) {
                int s_i = sym.arg_sorts[static_cast<size_t>(i)];
                sub_args[static_cast<size_t>(i)] = pick[static_cast<size_t>(i)];
                args[static_cast<size_t>(i)] =
                    subsets[static_cast<size_t>(s_i)][static_cast<size_t>(pick[static_cast<size_t>(i)])];
            }
            int v = m.function_value(f, args);
            sub.set_function(f, sub_args,
                             v == undet ? undet
                                        : out.renaming[static_cast<size_t>(sym.result_sort)]
                                                      [static_cast<size_t>(v)]);
            return true;
        });
    }
    out.structure = std::move(sub);
    return out;
}

Structure relabel(const Structure& m, const std::vector<std::vector<int>>& perm) {
    const Signature& sig = m.signature();
    for (size_t s = 0; s < perm.size(); ++s) {
        std::vector<int> check = perm[s];
        std::sort(check.begin(), check.end());
        for (size_t i = 0; i < check.size(); ++i)
            if (check[i] != static_cast<int>(i))
                throw input_error("relabel needs a bijection per sort");
    }
    Structure out(sig, m.sort_sizes(), m.name());
    for (int r = 0; r < sig.relation_count(); ++r) {
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        out.set_hyperedge_flag(r, m.hyperedge_flag(r));
        for (const auto& t : m.tuples(r)) {
            std::vector<int> img(t.size());
            for (int i = 0; i < sym.arity; ++i)
                img[static_cast<size_t>(i)] =
                    perm[static_cast<size_t>(sym.sorts[static_cast<size_t>(i)])]
                        [static_cast<size_t>(t[static_cast<size_t>(i)])];
            out.add_tuple(r, img);
        }
    }
    for (int f = 0; f < sig.function_count(); ++f) {
        const auto& sym = sig.functions()[static_cast<size_t>(f)];
        std::vector<int> ranges;
        for (int s : sym.arg_sorts) ranges.push_back(m.sort_size(s));
        std::vector<int> img(static_cast<size_t>(sym.arity));
        for_each_tuple(ranges, [&](const std::vector<int>& args) {
            for (int i = 0; i < sym.arity; ++i)
                img[static_cast<size_t>(i)] =
                    perm[static_cast<size_t>(sym.arg_sorts[static_cast<size_t>(i)])]
                        [static_cast<size_t>(args[static_cast<size_t>(i)])];
            int v = m.function_value(f, args);
            out.set_function(f, img,
                             v == undet ? undet
                                        : perm[static_cast<size_t>(sym.result_sort)]
                                              [static_cast<size_t>(v)]);
            return true;
        });
    }
    return out;
}

namespace {

// Canonical labelling by individualization-refinement. Leaves are discrete
// colourings; the minimum relation/function encoding over explored leaves is
// canonical, and ties yield automorphisms used to prune sibling branches.
struct CanonSearch {
    const Structure& m;
    GlobalIndex gi;
    std::size_t budget;
    std::size_t nodes = 0;
    std::string best;
    std::vector<int> best_perm; // global old id -> new rank
    std::vector<std::vector<int>> autos;

    CanonSearch(const Structure& m_, std::size_t budget_) : m(m_), gi(m_), budget(budget_) {}

    std::string encode(const std::vector<int>& perm) const {
        const Signature& sig = m.signature();
        std::string out;
        auto push16 = [&out](int v) {
            out.push_back(static_cast<char>((v >> 8) & 0xff));
            out.push_back(static_cast<char>(v & 0xff));
        };
        std::vector<std::vector<int>> rows;
        for (int r = 0; r < sig.relation_count(); ++r) {
            const auto& sym = sig.relations()[static_cast<size_t>(r)];
            rows.clear();
            for (const auto& t : m.tuples(r)) {
                std::vector<int> row(static_cast<size_t>(sym.arity));
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.sorts[static_cast<size_t>(i)], t[static_cast<size_t>(i)]);
                    row[static_cast<size_t>(i)] = perm[static_cast<size_t>(g)];
                }
                rows.push_back(std::move(row));
            }
            std::sort(rows.begin(), rows.end());
            push16(0x7e00 + r);
            for (const auto& row : rows)
                for (int v : row) push16(v + 1);
        }
        for (int f = 0; f < sig.function_count(); ++f) {
            const auto& sym = sig.functions()[static_cast<size_t>(f)];
            std::vector<int> ranges;
            for (int s : sym.arg_sorts) ranges.push_back(m.sort_size(s));
            rows.clear();
            for_each_tuple(ranges, [&](const std::vector<int>& args) {
                std::vector<int> row(static_cast<size_t>(sym.arity) + 1);
                for (int i = 0; i < sym.arity; ++i) {
                    int g = gi.global(sym.arg_sorts[static_cast<size_t>(i)], args[static_cast<size_t>(i)]);
                    row[static_cast<size_t>(i)] = perm[static_cast<size_t>(g)];
                }
                int v = m.function_value(f, args);
                row.back() =
                    v == undet ? -1 : perm[static_cast<size_t>(gi.global(sym.result_sort, v))];
                rows.push_back(std::move(row));
                return true;
            });
            std::sort(rows.begin(), rows.end());
            push16(0x7f00 + f);
            for (const auto& row : rows)
                for (int v : row) push16(v + 1);
        }
        return out;
    }

    void leaf(const std::vector<int>& colour) {
        std::string enc = encode(colour);
        if (best.empty() || enc < best) {
            best = enc;
            best_perm = colour;
        } else if (enc == best) {
            // best_perm and colour are two canonical orderings; their
            // composition is an automorphism of m.
            int n = gi.total;
            std::vector<int> inv(static_cast<size_t>(n));
            for (int g = 0; g < n; ++g) inv[static_cast<size_t>(best_perm[static_cast<size_t>(g)])] = g;
            std::vector<int> aut(static_cast<size_t>(n));
            for (int g = 0; g < n; ++g)
                aut[static_cast<size_t>(g)] = inv[static_cast<size_t>(colour[static_cast<size_t>(g)])];
            autos.push_back(std::move(aut));
        }
    }

    void run(const std::vector<int>& colour, std::vector<int>& individualized) {
        if (++nodes > budget) throw budget_error("canonical form search exceeded node budget");
        int n = gi.total;
        // Find the first non-singleton colour class.
        int target = -1;
        {
            std::vector<int> count(static_cast<size_t>(n), 0);
            for (int c : colour) ++count[static_cast<size_t>(c)];
            for (int c = 0; c < n; ++c)
                if (count[static_cast<size_t>(c)] > 1) {
                    target = c;
                    break;
                }
        }
        if (target < 0) {
            leaf(colour);
            return;
        }
        std::vector<int> cell;
        for (int g = 0; g < n; ++g)
            if (colour[static_cast<size_t>(g)] == target) cell.push_back(g);

        // One candidate per orbit of the discovered automorphisms that fix the
        // individualized prefix pointwise.
        std::vector<int> parent(static_cast<size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<size_t>(x)] != x) {
                parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
                x = parent[static_cast<size_t>(x)];
            }
            return x;
        };
        for (const auto& aut : autos) {
            bool fixes = true;
            for (int p : individualized)
                if (aut[static_cast<size_t>(p)] != p) {
                    fixes = false;
                    break;
                }
            if (!fixes) continue;
            for (int g = 0; g < n; ++g) {
                int x = find(g), y = find(aut[static_cast<size_t>(g)]);
                if (x != y) parent[static_cast<size_t>(std::max(x, y))] = std::min(x, y);
            }
        }
        std::set<int> tried_orbits;
        for (int cand : cell) {
            if (!tried_orbits.insert(find(cand)).second) continue;
            std::vector<int> split(colour.size());
            for (size_t g = 0; g < colour.size(); ++g)
                split[g] = 2 * colour[g] + (static_cast<int>(g) == cand ? 0 : 1);
            individualized.push_back(cand);
            run(stable_colouring(m, normalize(split)), individualized);
            individualized.pop_back();
        }
    }

    static std::vector<int> normalize(const std::vector<int>& colour) {
        std::vector<int> sorted(colour);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> out(colour.size());
        for (size_t i = 0; i < colour.size(); ++i)
            out[i] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), colour[i]) - sorted.begin());
        return out;
    }

    void search() {
        std::vector<int> individualized;
        run(stable_colouring(m, initial_colouring(m)), individualized);
    }

    std::string key_prefix() const {
        std::string out;
        for (int v : m.sort_sizes()) out += std::to_string(v) + ";";
        out += "|";
        return out;
    }
};

} // namespace

std::string canonical_key(const Structure& m, std::size_t budget) {
    CanonSearch cs(m, budget);
    if (cs.gi.total == 0) return cs.key_prefix();
    cs.search();
    return cs.key_prefix() + cs.best;
}

std::vector<std::vector<int>> canonical_permutation(const Structure& m, std::size_t budget) {
    CanonSearch cs(m, budget);
    std::vector<std::vector<int>> out(m.sort_sizes().size());
    if (cs.gi.total > 0) cs.search();
    for (size_t s = 0; s < out.size(); ++s) {
        out[s].resize(static_cast<size_t>(m.sort_sizes()[s]));
        for (int e = 0; e < m.sort_sizes()[s]; ++e) {
            int g = cs.gi.global(static_cast<int>(s), e);
            // Ranks are global; shift back into the sort's own range.
            out[s][static_cast<size_t>(e)] =
                cs.best_perm[static_cast<size_t>(g)] - cs.gi.offset[s];
        }
    }
    return out;
}

} // namespace fmlab
