#include "fmlab/products.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fmlab/errors.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

ProductKind product_kind_from_string(const std::string& name) {
    if (name == "full") return ProductKind::full;
    if (name == "lex") return ProductKind::lex;
    if (name == "disjoint") return ProductKind::disjoint;
    if (name == "superpose" || name == "superposition")
        return ProductKind::superposition;
    throw input_error("unknown product kind: " + name);
}

std::string to_string(ProductKind k) {
    switch (k) {
        case ProductKind::full: return "full";
        case ProductKind::lex: return "lex";
        case ProductKind::disjoint: return "disjoint";
        case ProductKind::superposition: return "superposition";
    }
    return "?";
}

namespace {

void require_single_sorted(const Structure& m, const std::string& role) {
    if (m.signature().sort_count() != 1)
        throw input_error(role + " must be single-sorted");
}

bool name_in(const Signature& sig, const std::string& name) {
    return sig.relation_index_opt(name) >= 0 || sig.function_index_opt(name) >= 0;
}

// Disambiguates factor symbol names: kept as-is unless both factors use them.
std::string pick_name(const std::string& name, const Signature& other,
                      const std::string& suffix) {
    return name_in(other, name) ? name + suffix : name;
}

} // namespace

Structure full_product(const Structure& m1, const Structure& m2) {
    require_single_sorted(m1, "left factor");
    require_single_sorted(m2, "right factor");
    const Signature& s1 = m1.signature();
    const Signature& s2 = m2.signature();

    std::vector<RelationSymbol> rels;
    std::vector<FunctionSymbol> fns;
    for (const auto& r : s1.relations()) {
        RelationSymbol sym{pick_name(r.name, s2, ".1"), r.arity,
                           std::vector<int>(static_cast<size_t>(r.arity), 1)};
        rels.push_back(sym);
    }
    for (const auto& r : s2.relations()) {
        RelationSymbol sym{pick_name(r.name, s1, ".2"), r.arity,
                           std::vector<int>(static_cast<size_t>(r.arity), 2)};
        rels.push_back(sym);
    }
    for (const auto& f : s1.functions())
        fns.push_back({pick_name(f.name, s2, ".1"), f.arity,
                       std::vector<int>(static_cast<size_t>(f.arity), 1), 1});
    for (const auto& f : s2.functions())
        fns.push_back({pick_name(f.name, s1, ".2"), f.arity,
                       std::vector<int>(static_cast<size_t>(f.arity), 2), 2});
    for (const auto& reserved : {"pi1", "pi2"})
        if (name_in(s1, reserved) || name_in(s2, reserved))
            throw input_error(std::string("factor symbol name ") + reserved +
                              " is reserved by the full product");
    fns.push_back({"pi1", 1, {0}, 1});
    fns.push_back({"pi2", 1, {0}, 2});

    int n1 = m1.sort_size(0), n2 = m2.sort_size(0);
    Signature sig({"main", "left", "right"}, rels, fns);
    Structure p(sig, {n1 * n2, n1, n2},
                m1.name().empty() || m2.name().empty()
                    ? "product"
                    : m1.name() + "x" + m2.name());

    int at = 0;
    for (int r = 0; r < s1.relation_count(); ++r, ++at) {
        p.set_hyperedge_flag(at, m1.hyperedge_flag(r));
        for (const auto& t : m1.tuples(r)) p.add_tuple(at, t);
    }
    for (int r = 0; r < s2.relation_count(); ++r, ++at) {
        p.set_hyperedge_flag(at, m2.hyperedge_flag(r));
        for (const auto& t : m2.tuples(r)) p.add_tuple(at, t);
    }
    int fat = 0;
    for (int f = 0; f < s1.function_count(); ++f, ++fat)
        p.set_function_table(fat, m1.function_table(f));
    for (int f = 0; f < s2.function_count(); ++f, ++fat)
        p.set_function_table(fat, m2.function_table(f));
    std::vector<int> pi1(static_cast<size_t>(n1 * n2)), pi2(pi1.size());
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) {
            pi1[static_cast<size_t>(a * n2 + b)] = a;
            pi2[static_cast<size_t>(a * n2 + b)] = b;
        }
    p.set_function_table(fat, std::move(pi1));
    p.set_function_table(fat + 1, std::move(pi2));
    return p;
}

Structure lex_sum(const Structure& spine, const std::vector<Structure>& ribs) {
    require_single_sorted(spine, "spine");
    if (static_cast<int>(ribs.size()) != spine.sort_size(0))
        throw input_error("need one rib per spine element");
    for (const auto& rib : ribs) {
        require_single_sorted(rib, "rib");
        if (!(rib.signature() == ribs.front().signature()))
            throw input_error("ribs must share one signature");
        if (rib.sort_size(0) < 1) throw input_error("ribs must be nonempty");
    }
    const Signature& rs = ribs.front().signature();
    const Signature& ss = spine.signature();
    if (name_in(rs, "v") || name_in(ss, "v"))
        throw input_error("symbol name v is reserved by the lexicographic sum");

    std::vector<RelationSymbol> rels;
    std::vector<FunctionSymbol> fns;
    for (const auto& r : rs.relations())
        rels.push_back({pick_name(r.name, ss, ".rib"), r.arity,
                        std::vector<int>(static_cast<size_t>(r.arity), 0)});
    for (const auto& r : ss.relations())
        rels.push_back({pick_name(r.name, rs, ".spine"), r.arity,
                        std::vector<int>(static_cast<size_t>(r.arity), 1)});
    for (const auto& f : rs.functions())
        fns.push_back({pick_name(f.name, ss, ".rib"), f.arity,
                       std::vector<int>(static_cast<size_t>(f.arity), 0), 0});
    for (const auto& f : ss.functions())
        fns.push_back({pick_name(f.name, rs, ".spine"), f.arity,
                       std::vector<int>(static_cast<size_t>(f.arity), 1), 1});
    fns.push_back({"v", 1, {0}, 1});

    int spine_n = spine.sort_size(0);
    std::vector<int> offset(static_cast<size_t>(spine_n) + 1, 0);
    for (int a = 0; a < spine_n; ++a)
        offset[static_cast<size_t>(a) + 1] =
            offset[static_cast<size_t>(a)] + ribs[static_cast<size_t>(a)].sort_size(0);
    int main_n = offset[static_cast<size_t>(spine_n)];

    Signature sig({"main", "spine"}, rels, fns);
    Structure p(sig, {main_n, spine_n},
                spine.name().empty() ? "lexsum" : spine.name() + "[ribs]");

    int at = 0;
    for (int r = 0; r < rs.relation_count(); ++r, ++at) {
        p.set_hyperedge_flag(at, ribs.front().hyperedge_flag(r));
        for (int a = 0; a < spine_n; ++a)
            for (auto t : ribs[static_cast<size_t>(a)].tuples(r)) {
                for (int& x : t) x += offset[static_cast<size_t>(a)];
                p.add_tuple(at, t);
            }
    }
    for (int r = 0; r < ss.relation_count(); ++r, ++at) {
        p.set_hyperedge_flag(at, spine.hyperedge_flag(r));
        for (const auto& t : spine.tuples(r)) p.add_tuple(at, t);
    }

    int fat = 0;
    for (int f = 0; f < rs.function_count(); ++f, ++fat) {
        const auto& sym = rs.functions()[static_cast<size_t>(f)];
        std::vector<int> ranges(static_cast<size_t>(sym.arity), main_n);
        for_each_tuple(ranges, [&](const std::vector<int>& args) {
            // one shared fibre, else the sentinel
            int fibre = -1;
            bool mixed = false;
            for (int x : args) {
                int a = static_cast<int>(std::upper_bound(offset.begin(), offset.end(),
                                                          x) -
                                         offset.begin()) -
                        1;
                if (fibre == -1) fibre = a;
                else if (fibre != a) mixed = true;
            }
            int value = undet;
            if (!mixed && sym.arity > 0) {
                std::vector<int> local(args);
                for (int& x : local) x -= offset[static_cast<size_t>(fibre)];
                int v = ribs[static_cast<size_t>(fibre)].function_value(f, local);
                if (v != undet) value = v + offset[static_cast<size_t>(fibre)];
            }
            p.set_function(fat, args, value); // rib constants have no fibre: undet
            return true;
        });
    }
    for (int f = 0; f < ss.function_count(); ++f, ++fat)
        p.set_function_table(fat, spine.function_table(f));
    std::vector<int> v_table(static_cast<size_t>(main_n));
    for (int a = 0; a < spine_n; ++a)
        for (int x = offset[static_cast<size_t>(a)]; x < offset[static_cast<size_t>(a) + 1];
             ++x)
            v_table[static_cast<size_t>(x)] = a;
    p.set_function_table(fat, std::move(v_table));
    return p;
}

Structure disjoint_union(const Structure& a, const Structure& b) {
    require_single_sorted(a, "left operand");
    require_single_sorted(b, "right operand");
    if (!(a.signature() == b.signature()))
        throw input_error("disjoint union needs one shared signature");
    if (a.signature().function_count() > 0)
        throw input_error("disjoint union of functional structures is undefined "
                          "(cross-copy values have no home)");
    int na = a.sort_size(0);
    Structure u(a.signature(), {na + b.sort_size(0)},
                a.name().empty() || b.name().empty() ? "union"
                                                     : a.name() + "+" + b.name());
    for (int r = 0; r < a.signature().relation_count(); ++r) {
        u.set_hyperedge_flag(r, a.hyperedge_flag(r) && b.hyperedge_flag(r));
        for (const auto& t : a.tuples(r)) u.add_tuple(r, t);
        for (auto t : b.tuples(r)) {
            for (int& x : t) x += na;
            u.add_tuple(r, t);
        }
    }
    return u;
}

Structure free_superposition(const Structure& a, const Structure& b,
                             const std::vector<int>& bijection) {
    require_single_sorted(a, "left operand");
    require_single_sorted(b, "right operand");
    int n = a.sort_size(0);
    if (b.sort_size(0) != n)
        throw input_error("superposition needs equal domain sizes");
    if (static_cast<int>(bijection.size()) != n)
        throw input_error("bijection must cover the whole domain");
    std::vector<int> inverse(static_cast<size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
        int y = bijection[static_cast<size_t>(x)];
        if (y < 0 || y >= n || inverse[static_cast<size_t>(y)] != -1)
            throw input_error("superposition map is not a bijection");
        inverse[static_cast<size_t>(y)] = x;
    }
    const Signature& sa = a.signature();
    const Signature& sb = b.signature();
    std::vector<RelationSymbol> rels = sa.relations();
    std::vector<FunctionSymbol> fns = sa.functions();
    for (const auto& r : sb.relations()) {
        if (name_in(sa, r.name))
            throw input_error("superposition needs disjoint signatures; " + r.name +
                              " appears twice");
        rels.push_back(r);
    }
    for (const auto& f : sb.functions()) {
        if (name_in(sa, f.name))
            throw input_error("superposition needs disjoint signatures; " + f.name +
                              " appears twice");
        fns.push_back(f);
    }
    Signature sig({sa.sorts().front()}, rels, fns);
    Structure s(sig, {n}, a.name().empty() ? "superposition" : a.name() + "*");
    int at = 0;
    for (int r = 0; r < sa.relation_count(); ++r, ++at) {
        s.set_hyperedge_flag(at, a.hyperedge_flag(r));
        for (const auto& t : a.tuples(r)) s.add_tuple(at, t);
    }
    for (int r = 0; r < sb.relation_count(); ++r, ++at) {
        s.set_hyperedge_flag(at, b.hyperedge_flag(r));
        for (auto t : b.tuples(r)) {
            for (int& x : t) x = inverse[static_cast<size_t>(x)];
            s.add_tuple(at, t);
        }
    }
    int fat = 0;
    for (int f = 0; f < sa.function_count(); ++f, ++fat)
        s.set_function_table(fat, a.function_table(f));
    for (int f = 0; f < sb.function_count(); ++f, ++fat) {
        const auto& sym = sb.functions()[static_cast<size_t>(f)];
        std::vector<int> ranges(static_cast<size_t>(sym.arity), n);
        for_each_tuple(ranges, [&](const std::vector<int>& args) {
            std::vector<int> mapped(args);
            for (int& x : mapped) x = bijection[static_cast<size_t>(x)];
            int v = b.function_value(f, mapped);
            s.set_function(fat, args, v == undet ? undet : inverse[static_cast<size_t>(v)]);
            return true;
        });
    }
    return s;
}

Structure restrict_to_sort(const Structure& m, int sort) {
    const Signature& sig = m.signature();
    if (sort < 0 || sort >= sig.sort_count()) throw input_error("no such sort");
    std::vector<RelationSymbol> rels;
    std::vector<int> kept_rels;
    for (int r = 0; r < sig.relation_count(); ++r) {
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        if (std::all_of(sym.sorts.begin(), sym.sorts.end(),
                        [&](int s) { return s == sort; })) {
            rels.push_back({sym.name, sym.arity,
                            std::vector<int>(static_cast<size_t>(sym.arity), 0)});
            kept_rels.push_back(r);
        }
    }
    std::vector<FunctionSymbol> fns;
    std::vector<int> kept_fns;
    for (int f = 0; f < sig.function_count(); ++f) {
        const auto& sym = sig.functions()[static_cast<size_t>(f)];
        bool on_sort = sym.result_sort == sort &&
                       std::all_of(sym.arg_sorts.begin(), sym.arg_sorts.end(),
                                   [&](int s) { return s == sort; });
        if (on_sort) {
            fns.push_back({sym.name, sym.arity,
                           std::vector<int>(static_cast<size_t>(sym.arity), 0), 0});
            kept_fns.push_back(f);
        }
    }
    Structure out(Signature({"main"}, rels, fns), {m.sort_size(sort)}, m.name());
    for (size_t i = 0; i < kept_rels.size(); ++i) {
        out.set_hyperedge_flag(static_cast<int>(i), m.hyperedge_flag(kept_rels[i]));
        for (const auto& t : m.tuples(kept_rels[i]))
            out.add_tuple(static_cast<int>(i), t);
    }
    for (size_t i = 0; i < kept_fns.size(); ++i)
        out.set_function_table(static_cast<int>(i), m.function_table(kept_fns[i]));
    return out;
}

namespace {

// m plus one extra (empty) relation; contents copied symbol-by-symbol.
Structure extend_with_relation(const Structure& m, const RelationSymbol& sym) {
    const Signature& sig = m.signature();
    if (name_in(sig, sym.name))
        throw input_error("symbol " + sym.name + " already exists in the signature");
    auto rels = sig.relations();
    rels.push_back(sym);
    Signature nsig(sig.sorts(), rels, sig.functions());
    Structure out(nsig, m.sort_sizes(), m.name());
    for (int r = 0; r < sig.relation_count(); ++r) {
        out.set_hyperedge_flag(r, m.hyperedge_flag(r));
        for (const auto& t : m.tuples(r)) out.add_tuple(r, t);
    }
    for (int f = 0; f < sig.function_count(); ++f)
        out.set_function_table(f, m.function_table(f));
    return out;
}

} // namespace

Structure add_kernel_relation(const Structure& m, const std::string& fn,
                              const std::string& name) {
    int f = m.signature().function_index_opt(fn);
    if (f < 0) throw input_error("no function named " + fn);
    const auto& sym = m.signature().functions()[static_cast<size_t>(f)];
    if (sym.arity != 1)
        throw input_error("kernel relation needs a unary function");
    int sort = sym.arg_sorts[0];
    Structure out = extend_with_relation(
        m, {name, 2, {sort, sort}});
    int rel = out.signature().relation_index(name);
    int n = m.sort_size(sort);
    for (int x = 0; x < n; ++x) {
        int vx = m.function_value(f, {x});
        if (vx == undet) continue;
        for (int y = 0; y < n; ++y)
            if (m.function_value(f, {y}) == vx) out.add_tuple(rel, {x, y});
    }
    return out;
}

LexEnriched lex_sum_enriched(const Structure& spine,
                             const std::vector<Structure>& ribs) {
    LexEnriched out;
    out.sum = lex_sum(spine, ribs);

    std::vector<std::string> keys;
    for (const auto& rib : ribs) keys.push_back(canonical_key(rib));
    std::vector<std::string> distinct(keys);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    out.type_count = static_cast<int>(distinct.size());
    for (const auto& k : keys)
        out.rib_type.push_back(static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(), k) - distinct.begin()));

    int spine_sort = 1; // lex_sum's spine sort
    Structure sum = out.sum;
    Structure sp = spine;
    for (int t = 0; t < out.type_count; ++t) {
        std::string name = "T" + std::to_string(t);
        sum = extend_with_relation(sum, {name, 1, {spine_sort}});
        sp = extend_with_relation(sp, {name, 1, {0}});
        int rel_sum = sum.signature().relation_index(name);
        int rel_sp = sp.signature().relation_index(name);
        for (size_t a = 0; a < keys.size(); ++a)
            if (out.rib_type[a] == t) {
                sum.add_tuple(rel_sum, {static_cast<int>(a)});
                sp.add_tuple(rel_sp, {static_cast<int>(a)});
            }
    }
    out.sum = std::move(sum);
    out.spine = std::move(sp);
    return out;
}

namespace {

void charge(std::uint64_t& spent, std::uint64_t budget) {
    if (++spent > budget)
        throw budget_error("product fragment candidate budget " +
                           std::to_string(budget) + " exceeded");
}

} // namespace

ClassFragment product_fragment(const ClassFragment& f1, const ClassFragment& f2,
                               ProductKind kind, int bound, std::uint64_t budget) {
    std::uint64_t spent = 0;
    switch (kind) {
        case ProductKind::full: {
            ClassFragment out(
                full_product(f1.members().front(), f2.members().front()).signature(),
                bound);
            for (const auto& m1 : f1.members())
                for (const auto& m2 : f2.members()) {
                    charge(spent, budget);
                    Structure p = full_product(m1, m2);
                    if (p.total_size() <= bound) out.add(p);
                    ClassFragment sub = age(p, std::min(bound, p.total_size()));
                    spent += sub.size();
                    if (spent > budget)
                        throw budget_error("product fragment candidate budget " +
                                           std::to_string(budget) + " exceeded");
                    for (const auto& s : sub.members()) out.add(s);
                }
            out.sort_members();
            return out;
        }
        case ProductKind::lex: {
            Structure seed = lex_sum(
                f1.members().front(),
                std::vector<Structure>(
                    static_cast<size_t>(f1.members().front().sort_size(0)),
                    f2.members().front()));
            ClassFragment out(seed.signature(), bound);
            for (const auto& spine : f1.members()) {
                int n = spine.sort_size(0);
                auto aut = automorphism_group(spine);
                std::vector<std::vector<int>> gens;
                for (const auto& g : aut.generators) gens.push_back(g.map[0]);
                int rib_count = static_cast<int>(f2.members().size());
                std::vector<int> ranges(static_cast<size_t>(n), rib_count);
                for_each_tuple(ranges, [&](const std::vector<int>& assign) {
                    // keep one assignment per spine-automorphism orbit
                    std::vector<std::vector<int>> frontier = {assign};
                    std::set<std::vector<int>> seen(frontier.begin(), frontier.end());
                    bool minimal = true;
                    while (!frontier.empty() && minimal) {
                        std::vector<std::vector<int>> next;
                        for (const auto& cur : frontier)
                            for (const auto& g : gens) {
                                std::vector<int> img(cur.size());
                                for (int i = 0; i < n; ++i)
                                    img[static_cast<size_t>(i)] =
                                        cur[static_cast<size_t>(g[static_cast<size_t>(i)])];
                                if (img < assign) {
                                    minimal = false;
                                    break;
                                }
                                if (seen.insert(img).second) next.push_back(img);
                            }
                        frontier = std::move(next);
                    }
                    if (!minimal) return true;
                    charge(spent, budget);
                    int total = n;
                    std::vector<Structure> ribs;
                    for (int a = 0; a < n; ++a) {
                        const Structure& rib =
                            f2.members()[static_cast<size_t>(assign[static_cast<size_t>(a)])];
                        total += rib.total_size();
                        ribs.push_back(rib);
                    }
                    if (total <= bound) out.add(lex_sum(spine, ribs));
                    return true;
                });
            }
            out.sort_members();
            return out;
        }
        case ProductKind::disjoint: {
            ClassFragment out(f1.signature(), bound);
            for (const auto& a : f1.members())
                for (const auto& b : f2.members()) {
                    charge(spent, budget);
                    if (a.total_size() + b.total_size() > bound) continue;
                    out.add(disjoint_union(a, b));
                }
            out.sort_members();
            return out;
        }
        case ProductKind::superposition: {
            const Signature& sa = f1.signature();
            const Signature& sb = f2.signature();
            if (sa.sort_count() != 1 || sb.sort_count() != 1)
                throw input_error("superposition operands must be single-sorted");
            std::vector<RelationSymbol> rels = sa.relations();
            std::vector<FunctionSymbol> fns = sa.functions();
            for (const auto& r : sb.relations()) {
                if (name_in(sa, r.name))
                    throw input_error("superposition needs disjoint signatures; " +
                                      r.name + " appears twice");
                rels.push_back(r);
            }
            for (const auto& f : sb.functions()) {
                if (name_in(sa, f.name))
                    throw input_error("superposition needs disjoint signatures; " +
                                      f.name + " appears twice");
                fns.push_back(f);
            }
            ClassFragment out(Signature({sa.sorts().front()}, rels, fns), bound);
            for (const auto& a : f1.members())
                for (const auto& b : f2.members()) {
                    if (a.sort_size(0) != b.sort_size(0)) continue;
                    if (a.total_size() > bound) continue;
                    std::vector<int> perm(static_cast<size_t>(a.sort_size(0)));
                    for (size_t i = 0; i < perm.size(); ++i)
                        perm[i] = static_cast<int>(i);
                    do {
                        charge(spent, budget);
                        out.add(free_superposition(a, b, perm));
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }
            out.sort_members();
            return out;
        }
    }
    throw input_error("unknown product kind");
}

} // namespace fmlab
