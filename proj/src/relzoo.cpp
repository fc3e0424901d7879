#include "fmlab/relzoo.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "fmlab/errors.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/fragments.hpp"
#include "fmlab/structure_io.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

int BinaryTree::leaf_count() const {
    int n = 0;
    for (const auto& node : nodes)
        if (node.left < 0) ++n;
    return n;
}

std::vector<int> BinaryTree::leaf_order() const {
    std::vector<int> order;
    std::function<void(int)> dfs = [&](int u) {
        const Node& node = nodes[static_cast<size_t>(u)];
        if (node.left < 0) {
            order.push_back(u);
            return;
        }
        dfs(node.left);
        dfs(node.right);
    };
    if (!nodes.empty()) dfs(0);
    return order;
}

BinaryTree random_binary_tree(int leaves, std::uint64_t seed) {
    if (leaves < 1) throw input_error("tree needs at least one leaf");
    if (leaves > 31) throw input_error("tree generators support at most 31 leaves");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    BinaryTree t;
    std::function<int(int)> build = [&](int k) {
        int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back({});
        if (k == 1) return id;
        int l = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1));
        int li = build(l);
        int ri = build(k - l);
        t.nodes[static_cast<size_t>(id)].left = li;
        t.nodes[static_cast<size_t>(id)].right = ri;
        return id;
    };
    build(leaves);
    return t;
}

std::vector<BinaryTree> all_binary_trees(int leaves) {
    if (leaves < 1) throw input_error("tree needs at least one leaf");
    if (leaves > 12) throw input_error("exhaustive tree corpus capped at 12 leaves");
    if (leaves == 1) {
        BinaryTree t;
        t.nodes.push_back({});
        return {t};
    }
    std::vector<BinaryTree> out;
    for (int l = 1; l < leaves; ++l) {
        auto lefts = all_binary_trees(l);
        auto rights = all_binary_trees(leaves - l);
        for (const auto& lt : lefts)
            for (const auto& rt : rights) {
                BinaryTree t;
                int loff = 1;
                int roff = 1 + static_cast<int>(lt.nodes.size());
                t.nodes.push_back({loff, roff});
                for (auto node : lt.nodes) {
                    if (node.left >= 0) {
                        node.left += loff;
                        node.right += loff;
                    }
                    t.nodes.push_back(node);
                }
                for (auto node : rt.nodes) {
                    if (node.left >= 0) {
                        node.left += roff;
                        node.right += roff;
                    }
                    t.nodes.push_back(node);
                }
                out.push_back(std::move(t));
            }
    }
    return out;
}

namespace {

struct TreeGeom {
    std::vector<int> parent;
    std::vector<int> depth;
    std::vector<int> leaves; // element -> node id, planar order
};

TreeGeom tree_geom(const BinaryTree& t) {
    TreeGeom g;
    g.parent.assign(t.nodes.size(), -1);
    g.depth.assign(t.nodes.size(), 0);
    std::function<void(int)> dfs = [&](int u) {
        const auto& node = t.nodes[static_cast<size_t>(u)];
        if (node.left < 0) {
            g.leaves.push_back(u);
            return;
        }
        for (int c : {node.left, node.right}) {
            g.parent[static_cast<size_t>(c)] = u;
            g.depth[static_cast<size_t>(c)] = g.depth[static_cast<size_t>(u)] + 1;
            dfs(c);
        }
    };
    if (!t.nodes.empty()) dfs(0);
    return g;
}

bool is_ancestor(const TreeGeom& g, int u, int v) {
    while (g.depth[static_cast<size_t>(v)] > g.depth[static_cast<size_t>(u)])
        v = g.parent[static_cast<size_t>(v)];
    return u == v;
}

int lca(const TreeGeom& g, int u, int v) {
    while (g.depth[static_cast<size_t>(u)] > g.depth[static_cast<size_t>(v)])
        u = g.parent[static_cast<size_t>(u)];
    while (g.depth[static_cast<size_t>(v)] > g.depth[static_cast<size_t>(u)])
        v = g.parent[static_cast<size_t>(v)];
    while (u != v) {
        u = g.parent[static_cast<size_t>(u)];
        v = g.parent[static_cast<size_t>(v)];
    }
    return u;
}

std::uint64_t path_mask(const TreeGeom& g, int u, int v) {
    std::uint64_t mask = 0;
    while (g.depth[static_cast<size_t>(u)] > g.depth[static_cast<size_t>(v)]) {
        mask |= 1ull << u;
        u = g.parent[static_cast<size_t>(u)];
    }
    while (g.depth[static_cast<size_t>(v)] > g.depth[static_cast<size_t>(u)]) {
        mask |= 1ull << v;
        v = g.parent[static_cast<size_t>(v)];
    }
    while (u != v) {
        mask |= (1ull << u) | (1ull << v);
        u = g.parent[static_cast<size_t>(u)];
        v = g.parent[static_cast<size_t>(v)];
    }
    return mask | (1ull << u);
}

// C(x;y,z) on leaves: y,z meet strictly below their meet with x.
bool c_holds(const TreeGeom& g, int x, int y, int z) {
    if (y == z) return x != y;
    if (x == y || x == z) return false;
    return !is_ancestor(g, lca(g, g.leaves[static_cast<size_t>(y)],
                               g.leaves[static_cast<size_t>(z)]),
                        g.leaves[static_cast<size_t>(x)]);
}

void fill_c(Structure& m, int rel, const TreeGeom& g) {
    int n = static_cast<int>(g.leaves.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (c_holds(g, x, y, z)) m.add_tuple(rel, {x, y, z});
}

void fill_d(Structure& m, int rel, const TreeGeom& g) {
    int n = static_cast<int>(g.leaves.size());
    std::vector<std::uint64_t> masks(static_cast<size_t>(n * n));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            masks[static_cast<size_t>(u * n + v)] =
                path_mask(g, g.leaves[static_cast<size_t>(u)],
                          g.leaves[static_cast<size_t>(v)]);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w)
                    if ((masks[static_cast<size_t>(x * n + y)] &
                         masks[static_cast<size_t>(z * n + w)]) == 0)
                        m.add_tuple(rel, {x, y, z, w});
}

void fill_chain(Structure& m, int rel, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.add_tuple(rel, {i, j});
}

void fill_cyclic(Structure& m, int rel, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                m.add_tuple(rel, {i, j, k});
                m.add_tuple(rel, {j, k, i});
                m.add_tuple(rel, {k, i, j});
            }
}

} // namespace

Structure c_from_tree(const BinaryTree& t) {
    TreeGeom g = tree_geom(t);
    Structure m(Signature::single_sorted({rel_symbol("C", 3)}),
                {static_cast<int>(g.leaves.size())}, "c-tree");
    fill_c(m, 0, g);
    return m;
}

Structure oc_from_tree(const BinaryTree& t) {
    TreeGeom g = tree_geom(t);
    int n = static_cast<int>(g.leaves.size());
    Structure m(Signature::single_sorted({rel_symbol("C", 3), rel_symbol("<", 2)}),
                {n}, "oc-tree");
    fill_c(m, 0, g);
    fill_chain(m, 1, n);
    return m;
}

Structure d_from_tree(const BinaryTree& t) {
    TreeGeom g = tree_geom(t);
    Structure m(Signature::single_sorted({rel_symbol("D", 4)}),
                {static_cast<int>(g.leaves.size())}, "d-tree");
    fill_d(m, 0, g);
    return m;
}

Structure od_from_tree(const BinaryTree& t) {
    TreeGeom g = tree_geom(t);
    int n = static_cast<int>(g.leaves.size());
    Structure m(Signature::single_sorted({rel_symbol("D", 4), rel_symbol("<", 2)}),
                {n}, "od-tree");
    fill_d(m, 0, g);
    fill_chain(m, 1, n);
    return m;
}

Structure cod_from_tree(const BinaryTree& t) {
    TreeGeom g = tree_geom(t);
    int n = static_cast<int>(g.leaves.size());
    Structure m(Signature::single_sorted({rel_symbol("D", 4), rel_symbol("CO", 3)}),
                {n}, "cod-tree");
    fill_d(m, 0, g);
    fill_cyclic(m, 1, n);
    return m;
}

Structure gen_structure(const std::string& kind, int size, std::uint64_t seed) {
    if (size < 1) throw input_error("size must be at least 1");
    std::string name = kind + std::to_string(size) + "s" + std::to_string(seed);
    if (kind == "lo") {
        Structure m = chain_structure(size);
        m.set_name(name);
        return m;
    }
    if (kind == "co") {
        Structure m(Signature::single_sorted({rel_symbol("CO", 3)}), {size}, name);
        fill_cyclic(m, 0, size);
        return m;
    }
    if (kind == "og") {
        Structure m(Signature::single_sorted({rel_symbol("E", 2), rel_symbol("<", 2)}),
                    {size}, name);
        m.set_hyperedge_flag(0, true);
        std::mt19937_64 rng(seed);
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j)
                if (rng() & 1) {
                    m.add_tuple(0, {i, j});
                    m.add_tuple(0, {j, i});
                }
        fill_chain(m, 1, size);
        return m;
    }
    if (kind == "oh3") {
        Structure m(Signature::single_sorted({rel_symbol("R", 3), rel_symbol("<", 2)}),
                    {size}, name);
        m.set_hyperedge_flag(0, true);
        std::mt19937_64 rng(seed);
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j)
                for (int k = j + 1; k < size; ++k)
                    if (rng() & 1) {
                        std::vector<int> tri = {i, j, k};
                        std::sort(tri.begin(), tri.end());
                        do {
                            m.add_tuple(0, tri);
                        } while (std::next_permutation(tri.begin(), tri.end()));
                    }
        fill_chain(m, 1, size);
        return m;
    }
    if (kind == "oc") {
        Structure m = oc_from_tree(random_binary_tree(size, seed));
        m.set_name(name);
        return m;
    }
    if (kind == "od") {
        Structure m = od_from_tree(random_binary_tree(size, seed));
        m.set_name(name);
        return m;
    }
    if (kind == "cod") {
        if (size < 3) throw input_error("cod needs at least 3 elements");
        Structure m = cod_from_tree(random_binary_tree(size, seed));
        m.set_name(name);
        return m;
    }
    throw input_error("unknown generator kind: " + kind);
}

std::vector<std::string> axiom_kinds() {
    return {"lo", "co", "og", "oh3", "oc", "od", "cod", "c", "d"};
}

std::vector<NamedFormula> axiom_suite(const std::string& kind) {
    auto kinds = axiom_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw input_error("no axiom suite for kind: " + kind);
#ifdef FMLAB_SOURCE_DIR
    std::string base = FMLAB_SOURCE_DIR;
#else
    std::string base = ".";
#endif
    return parse_axiom_suite(read_text_file(base + "/axioms/" + kind + ".ax"));
}

std::vector<AxiomVerdict> validate_structure(const Structure& m,
                                             const std::string& kind, int threads) {
    auto suite = axiom_suite(kind);
    std::vector<AxiomVerdict> verdicts(suite.size());
    std::vector<std::exception_ptr> errors(suite.size());
    auto run_one = [&](int i) {
        auto idx = static_cast<std::size_t>(i);
        try {
            AxiomVerdict v;
            v.name = suite[idx].name;
            auto witness = find_counterexample(m, suite[idx].formula);
            v.passed = !witness.has_value();
            if (witness) v.counterexample = *witness;
            verdicts[idx] = std::move(v);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    };
    if (threads > 1)
        parallel_for(static_cast<int>(suite.size()), threads, run_one);
    else
        for (int i = 0; i < static_cast<int>(suite.size()); ++i) run_one(i);
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return verdicts;
}

bool all_passed(const std::vector<AxiomVerdict>& verdicts) {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const AxiomVerdict& v) { return v.passed; });
}

namespace {

void require_suite(const Structure& m, const std::string& kind) {
    auto verdicts = validate_structure(m, kind);
    for (const auto& v : verdicts)
        if (!v.passed)
            throw input_error("input fails axiom " + v.name + " of the " + kind +
                              " suite");
}

int relation_or_throw(const Structure& m, const std::string& name, int arity) {
    int r = m.signature().relation_index_opt(name);
    if (r < 0 || m.signature().relations()[static_cast<size_t>(r)].arity != arity)
        throw input_error("structure lacks the " + std::to_string(arity) +
                          "-ary relation " + name);
    return r;
}

} // namespace

Structure d_to_c_pointed(const Structure& m, int point) {
    if (m.signature().sort_count() != 1)
        throw input_error("conversion expects a single-sorted structure");
    int d = relation_or_throw(m, "D", 4);
    int n = m.sort_size(0);
    if (point < 0 || point >= n) throw input_error("point out of range");
    require_suite(m, "d");
    Structure out(Signature::single_sorted({rel_symbol("C", 3)}), {n - 1},
                  m.name() + "-c@" + std::to_string(point));
    auto to_old = [&](int x) { return x < point ? x : x + 1; };
    for (int x = 0; x < n - 1; ++x)
        for (int y = 0; y < n - 1; ++y)
            for (int z = 0; z < n - 1; ++z)
                if (m.holds(d, {point, to_old(x), to_old(y), to_old(z)}))
                    out.add_tuple(0, {x, y, z});
    return out;
}

Structure c_to_d(const Structure& m) {
    if (m.signature().sort_count() != 1)
        throw input_error("conversion expects a single-sorted structure");
    int c = relation_or_throw(m, "C", 3);
    require_suite(m, "c");
    int n = m.sort_size(0);
    int a = n; // the fresh point gets the last id
    Structure out(Signature::single_sorted({rel_symbol("D", 4)}), {n + 1},
                  m.name() + "-d");
    auto holds_c = [&](int x, int y, int z) {
        if (x == a || y == a || z == a) return false;
        return m.holds(c, {x, y, z});
    };
    for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y)
            for (int z = 0; z <= n; ++z)
                for (int w = 0; w <= n; ++w) {
                    bool d;
                    if ((x == y && x != z && x != w) || (z == w && z != x && z != y)) {
                        d = true;
                    } else if (x != y && x != z && x != w && y != z && y != w &&
                               z != w) {
                        d = (x == a && holds_c(y, w, z)) ||
                            (y == a && holds_c(x, w, z)) ||
                            (z == a && holds_c(w, x, y)) ||
                            (w == a && holds_c(z, x, y)) ||
                            (holds_c(x, w, z) && holds_c(y, w, z)) ||
                            (holds_c(z, x, y) && holds_c(w, x, y));
                    } else {
                        d = false;
                    }
                    if (d) out.add_tuple(0, {x, y, z, w});
                }
    return out;
}

Structure od_to_oc(const Structure& m) {
    if (m.signature().sort_count() != 1)
        throw input_error("conversion expects a single-sorted structure");
    int d = relation_or_throw(m, "D", 4);
    int lt = relation_or_throw(m, "<", 2);
    require_suite(m, "od");
    int n = m.sort_size(0);
    if (n < 2) throw input_error("need at least 2 elements to drop the minimum");
    int minimum = 0;
    for (int x = 0; x < n; ++x) {
        bool least = true;
        for (int y = 0; y < n && least; ++y)
            if (y != x && !m.holds(lt, {x, y})) least = false;
        if (least) {
            minimum = x;
            break;
        }
    }
    Structure out(Signature::single_sorted({rel_symbol("C", 3), rel_symbol("<", 2)}),
                  {n - 1}, m.name() + "-oc");
    auto to_old = [&](int x) { return x < minimum ? x : x + 1; };
    for (int x = 0; x < n - 1; ++x)
        for (int y = 0; y < n - 1; ++y) {
            if (m.holds(lt, {to_old(x), to_old(y)})) out.add_tuple(1, {x, y});
            for (int z = 0; z < n - 1; ++z)
                if (m.holds(d, {minimum, to_old(x), to_old(y), to_old(z)}))
                    out.add_tuple(0, {x, y, z});
        }
    return out;
}

LiteralSystem literal_system_from_json(const nlohmann::ordered_json& j) {
    LiteralSystem s;
    try {
        if (j.contains("p"))
            for (const auto& e : j["p"])
                s.p.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        if (j.contains("l"))
            for (const auto& e : j["l"])
                s.l.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
        if (j.contains("r"))
            for (const auto& e : j["r"])
                s.r.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
        if (j.contains("q"))
            for (const auto& e : j["q"]) s.q.push_back(e.get<int>());
        if (j.contains("eq"))
            for (const auto& e : j["eq"]) s.equalities.push_back(e.get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed literal system: ") + e.what());
    }
    return s;
}

LiteralSolveResult solve_literal_system(const Structure& m, const LiteralSystem& s) {
    if (m.signature().sort_count() != 1)
        throw input_error("literal systems live on single-sorted structures");
    int d = relation_or_throw(m, "D", 4);
    int co = relation_or_throw(m, "CO", 3);
    int n = m.sort_size(0);
    auto check = [&](int e, const char* where) {
        if (e < 0 || e >= n)
            throw input_error(std::string("parameter out of range in ") + where);
    };
    auto in_q = [&](int e) {
        return std::find(s.q.begin(), s.q.end(), e) != s.q.end();
    };
    for (const auto& [a, b] : s.p) {
        check(a, "p");
        check(b, "p");
        if (!in_q(a) || !in_q(b))
            throw input_error("q must contain every parameter of p");
    }
    for (const auto& t : s.l)
        for (int e : t) {
            check(e, "l");
            if (!in_q(e)) throw input_error("q must contain every parameter of l");
        }
    for (const auto& t : s.r)
        for (int e : t) {
            check(e, "r");
            if (!in_q(e)) throw input_error("q must contain every parameter of r");
        }
    for (int e : s.q) check(e, "q");
    for (int e : s.equalities) check(e, "eq");

    LiteralSolveResult result;
    for (int x = 0; x < n; ++x) {
        bool ok = true;
        for (const auto& [a, b] : s.p)
            if (!m.holds(co, {a, x, b})) ok = false;
        for (const auto& t : s.l)
            if (ok && !m.holds(d, {t[0], t[1], t[2], x})) ok = false;
        for (const auto& t : s.r)
            if (ok && !m.holds(d, {x, t[0], t[1], t[2]})) ok = false;
        for (int e : s.q)
            if (ok && x == e) ok = false;
        for (int e : s.equalities)
            if (ok && x != e) ok = false;
        if (ok) result.satisfying.push_back(x);
    }
    result.exhaustive_sat = !result.satisfying.empty();
    result.witness = result.exhaustive_sat ? result.satisfying.front() : -1;

    result.reduction_sat = true;
    for (const auto& [a, b] : s.p)
        for (const auto& [a2, b2] : s.p) {
            if (b == a2) result.reduction_sat = false;
            if (m.holds(co, {a, b, a2}) && m.holds(co, {b, a2, b2}))
                result.reduction_sat = false;
        }
    result.agree = result.exhaustive_sat == result.reduction_sat;
    return result;
}

} // namespace fmlab
