#include "fmlab/fragments.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>

#include "fmlab/errors.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/structure_io.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

ClassFragment::ClassFragment(Signature sig, int bound)
    : sig_(std::move(sig)), bound_(bound) {
    if (bound_ < 1) throw input_error("fragment bound must be at least 1");
}

int ClassFragment::find_iso(const Structure& m) const {
    auto it = index_.find(canonical_key(m));
    return it == index_.end() ? -1 : it->second;
}

bool ClassFragment::add(const Structure& m) {
    if (!(m.signature() == sig_))
        throw input_error("fragment member has a different signature");
    int total = m.total_size();
    if (total < 1) throw input_error("fragments exclude the empty structure");
    if (total > bound_)
        throw input_error("fragment member exceeds the size bound " +
                          std::to_string(bound_));
    std::string key = canonical_key(m);
    if (index_.count(key)) return false;
    index_[key] = static_cast<int>(members_.size());
    members_.push_back(m);
    keys_.push_back(std::move(key));
    return true;
}

void ClassFragment::sort_members() {
    std::vector<int> order(members_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const Structure& a = members_[static_cast<size_t>(x)];
        const Structure& b = members_[static_cast<size_t>(y)];
        if (a.total_size() != b.total_size()) return a.total_size() < b.total_size();
        return structure_less(a, b);
    });
    std::vector<Structure> ms;
    std::vector<std::string> ks;
    for (int i : order) {
        ms.push_back(std::move(members_[static_cast<size_t>(i)]));
        ks.push_back(std::move(keys_[static_cast<size_t>(i)]));
    }
    members_ = std::move(ms);
    keys_ = std::move(ks);
    index_.clear();
    for (size_t i = 0; i < keys_.size(); ++i) index_[keys_[i]] = static_cast<int>(i);
}

namespace {

// Enumerates every per-sort subset family with 1..bound elements in total,
// in lexicographic order over the flattened (sort, id) ground set.
void for_each_subset(const Structure& m, int bound,
                     const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    std::vector<std::pair<int, int>> ground;
    for (int s = 0; s < m.signature().sort_count(); ++s)
        for (int e = 0; e < m.sort_size(s); ++e) ground.emplace_back(s, e);
    std::vector<std::vector<int>> subsets(
        static_cast<size_t>(m.signature().sort_count()));
    std::function<void(size_t)> rec = [&](size_t next) {
        bool any = false;
        for (const auto& sub : subsets)
            if (!sub.empty()) any = true;
        if (any) fn(subsets);
        int used = 0;
        for (const auto& sub : subsets) used += static_cast<int>(sub.size());
        if (used >= bound) return;
        for (size_t i = next; i < ground.size(); ++i) {
            subsets[static_cast<size_t>(ground[i].first)].push_back(ground[i].second);
            rec(i + 1);
            subsets[static_cast<size_t>(ground[i].first)].pop_back();
        }
    };
    rec(0);
}

} // namespace

ClassFragment age(const Structure& m, int bound) {
    if (bound < 1) throw input_error("age bound must be at least 1");
    ClassFragment out(m.signature(), bound);
    for_each_subset(m, bound, [&](const std::vector<std::vector<int>>& subsets) {
        try {
            auto sub = induced_substructure(m, subsets, ClosurePolicy::require);
            out.add(sub.structure);
        } catch (const input_error&) {
            // subset not closed under the functions: induces no substructure
        }
    });
    out.sort_members();
    return out;
}

ClassFragment hereditary_closure(const ClassFragment& f) {
    ClassFragment out(f.signature(), f.bound());
    for (const auto& m : f.members()) {
        out.add(m);
        ClassFragment sub = age(m, m.total_size());
        for (const auto& t : sub.members()) out.add(t);
    }
    out.sort_members();
    return out;
}

ClassProperty class_property_from_string(const std::string& name) {
    if (name == "hp" || name == "HP") return ClassProperty::hp;
    if (name == "jep" || name == "JEP") return ClassProperty::jep;
    if (name == "ap" || name == "AP") return ClassProperty::ap;
    if (name == "sap" || name == "SAP") return ClassProperty::sap;
    if (name == "fap" || name == "FAP") return ClassProperty::fap;
    throw input_error("unknown class property: " + name);
}

std::string to_string(ClassProperty p) {
    switch (p) {
        case ClassProperty::hp: return "HP";
        case ClassProperty::jep: return "JEP";
        case ClassProperty::ap: return "AP";
        case ClassProperty::sap: return "SAP";
        case ClassProperty::fap: return "FAP";
    }
    return "?";
}

namespace {

void record_failure(PropertyReport& report, const PropertyOptions& opt,
                    PropertyFailure failure) {
    report.holds = false;
    if (report.failures.size() < opt.max_failures)
        report.failures.push_back(std::move(failure));
}

void check_hp(const ClassFragment& f, const PropertyOptions& opt,
              PropertyReport& report) {
    for (size_t i = 0; i < f.members().size(); ++i) {
        const Structure& m = f.members()[i];
        ClassFragment sub = age(m, m.total_size());
        for (const auto& t : sub.members()) {
            ++report.instances;
            if (f.find_iso(t) >= 0) continue;
            record_failure(report, opt,
                           {{static_cast<int>(i)},
                            {},
                            "substructure of total size " +
                                std::to_string(t.total_size()) +
                                " has no isomorphic member"});
        }
    }
}

bool disjoint_images(const Embedding& e, const Embedding& g, int sorts) {
    for (int s = 0; s < sorts; ++s) {
        for (int x : e.map[static_cast<size_t>(s)])
            for (int y : g.map[static_cast<size_t>(s)])
                if (x == y) return false;
    }
    return true;
}

void check_jep(const ClassFragment& f, const PropertyOptions& opt, int wbound,
               PropertyReport& report) {
    int sorts = f.signature().sort_count();
    for (size_t i = 0; i < f.members().size(); ++i) {
        for (size_t j = i; j < f.members().size(); ++j) {
            ++report.instances;
            const Structure& a = f.members()[i];
            const Structure& b = f.members()[j];
            bool found = false;
            for (const auto& d : f.members()) {
                if (d.total_size() > wbound) continue;
                auto eas = enumerate_embeddings(a, d);
                if (eas.empty()) continue;
                auto ebs = enumerate_embeddings(b, d);
                if (ebs.empty()) continue;
                if (!opt.jep_disjoint) {
                    found = true;
                    break;
                }
                for (const auto& ea : eas) {
                    for (const auto& eb : ebs)
                        if (disjoint_images(ea, eb, sorts)) {
                            found = true;
                            break;
                        }
                    if (found) break;
                }
                if (found) break;
            }
            if (!found)
                record_failure(report, opt,
                               {{static_cast<int>(i), static_cast<int>(j)},
                                {},
                                std::string("no member of size <= ") +
                                    std::to_string(wbound) + " embeds both" +
                                    (opt.jep_disjoint ? " disjointly" : "")});
        }
    }
}

// Span over A: embeddings e: A -> B and g: A -> C. Yields each span once.
template <typename Fn>
void for_each_span(const ClassFragment& f, int wbound, PropertyReport& report,
                   Fn&& fn) {
    const auto& ms = f.members();
    for (size_t ai = 0; ai < ms.size(); ++ai) {
        for (size_t bi = 0; bi < ms.size(); ++bi) {
            auto es = enumerate_embeddings(ms[ai], ms[bi]);
            if (es.empty()) continue;
            for (size_t ci = bi; ci < ms.size(); ++ci) {
                auto gs = ci == bi ? es : enumerate_embeddings(ms[ai], ms[ci]);
                if (gs.empty()) continue;
                int pushout = ms[bi].total_size() + ms[ci].total_size() -
                              ms[ai].total_size();
                for (size_t ei = 0; ei < es.size(); ++ei) {
                    size_t g0 = ci == bi ? ei : 0;
                    for (size_t gi = g0; gi < gs.size(); ++gi) {
                        if (pushout > wbound) {
                            ++report.skipped;
                            continue;
                        }
                        ++report.instances;
                        fn(static_cast<int>(ai), static_cast<int>(bi),
                           static_cast<int>(ci), es[ei], gs[gi],
                           static_cast<int>(ei), static_cast<int>(gi));
                    }
                }
            }
        }
    }
}

// Does d complete the span (strong = no identifications beyond the A-image)?
bool amalgamates(const Structure& a, const Structure& b, const Structure& c,
                 const Structure& d, const Embedding& e, const Embedding& g,
                 bool strong) {
    int sorts = a.signature().sort_count();
    auto hbs = enumerate_embeddings(b, d);
    if (hbs.empty()) return false;
    auto hcs = enumerate_embeddings(c, d);
    for (const auto& hb : hbs) {
        for (const auto& hc : hcs) {
            bool ok = true;
            for (int s = 0; s < sorts && ok; ++s)
                for (int x = 0; x < a.sort_size(s) && ok; ++x)
                    if (hb.apply(s, e.apply(s, x)) != hc.apply(s, g.apply(s, x)))
                        ok = false;
            if (ok && strong) {
                // images meet only inside the amalgamated copy of A
                for (int s = 0; s < sorts && ok; ++s) {
                    std::vector<char> in_a(static_cast<size_t>(d.sort_size(s)), 0);
                    for (int x = 0; x < a.sort_size(s); ++x)
                        in_a[static_cast<size_t>(hb.apply(s, e.apply(s, x)))] = 1;
                    std::vector<char> in_b(static_cast<size_t>(d.sort_size(s)), 0);
                    for (int y : hb.map[static_cast<size_t>(s)])
                        in_b[static_cast<size_t>(y)] = 1;
                    for (int y : hc.map[static_cast<size_t>(s)])
                        if (in_b[static_cast<size_t>(y)] && !in_a[static_cast<size_t>(y)])
                            ok = false;
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

// Free amalgam of b and c over a (relational): domain B plus C minus g(A),
// relations the union of both images.
Structure free_amalgam(const Structure& a, const Structure& b, const Structure& c,
                       const Embedding& e, const Embedding& g) {
    const Signature& sig = a.signature();
    int sorts = sig.sort_count();
    std::vector<int> sizes(static_cast<size_t>(sorts));
    std::vector<std::vector<int>> cmap(static_cast<size_t>(sorts)); // C id -> D id
    for (int s = 0; s < sorts; ++s) {
        int n = b.sort_size(s);
        cmap[static_cast<size_t>(s)].assign(static_cast<size_t>(c.sort_size(s)), -1);
        for (int x = 0; x < a.sort_size(s); ++x)
            cmap[static_cast<size_t>(s)][static_cast<size_t>(g.apply(s, x))] =
                e.apply(s, x);
        for (int y = 0; y < c.sort_size(s); ++y)
            if (cmap[static_cast<size_t>(s)][static_cast<size_t>(y)] < 0)
                cmap[static_cast<size_t>(s)][static_cast<size_t>(y)] = n++;
        sizes[static_cast<size_t>(s)] = n;
    }
    Structure d(sig, sizes, "amalgam");
    for (int r = 0; r < sig.relation_count(); ++r) {
        d.set_hyperedge_flag(r, b.hyperedge_flag(r));
        for (const auto& t : b.tuples(r)) d.add_tuple(r, t);
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        for (auto t : c.tuples(r)) {
            for (size_t i = 0; i < t.size(); ++i)
                t[i] = cmap[static_cast<size_t>(sym.sorts[i])][static_cast<size_t>(t[i])];
            if (!d.holds(r, t)) d.add_tuple(r, t);
        }
    }
    return d;
}

} // namespace

PropertyReport check_property(const ClassFragment& f, ClassProperty which,
                              const PropertyOptions& opt) {
    PropertyReport report;
    report.which = which;
    int wbound = opt.witness_bound > 0 ? std::min(opt.witness_bound, f.bound())
                                       : f.bound();
    report.witness_bound = wbound;
    if (which == ClassProperty::fap && f.signature().function_count() > 0)
        throw input_error("free amalgamation needs a purely relational signature");

    switch (which) {
        case ClassProperty::hp:
            check_hp(f, opt, report);
            break;
        case ClassProperty::jep:
            check_jep(f, opt, wbound, report);
            break;
        case ClassProperty::ap:
        case ClassProperty::sap: {
            bool strong = which == ClassProperty::sap;
            for_each_span(f, wbound, report,
                          [&](int ai, int bi, int ci, const Embedding& e,
                              const Embedding& g, int ei, int gi) {
                              const auto& ms = f.members();
                              for (const auto& d : ms) {
                                  if (d.total_size() > wbound) continue;
                                  if (amalgamates(ms[static_cast<size_t>(ai)],
                                                  ms[static_cast<size_t>(bi)],
                                                  ms[static_cast<size_t>(ci)], d, e, g,
                                                  strong))
                                      return;
                              }
                              record_failure(report, opt,
                                             {{ai, bi, ci},
                                              {ei, gi},
                                              "no member completes the span"});
                          });
            break;
        }
        case ClassProperty::fap: {
            for_each_span(f, wbound, report,
                          [&](int ai, int bi, int ci, const Embedding& e,
                              const Embedding& g, int ei, int gi) {
                              const auto& ms = f.members();
                              Structure d = free_amalgam(ms[static_cast<size_t>(ai)],
                                                         ms[static_cast<size_t>(bi)],
                                                         ms[static_cast<size_t>(ci)], e, g);
                              if (f.find_iso(d) >= 0) return;
                              record_failure(report, opt,
                                             {{ai, bi, ci},
                                              {ei, gi},
                                              "free amalgam has no isomorphic member"});
                          });
            break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Fixtures and generators

Structure chain_structure(int n) {
    if (n < 1) throw input_error("chain size must be at least 1");
    Structure m(Signature::single_sorted({rel_symbol("<", 2)}), {n},
                "lo" + std::to_string(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.add_tuple(0, {i, j});
    return m;
}

Structure graph_structure(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw input_error("graph size must be at least 1");
    Structure m(Signature::single_sorted({rel_symbol("E", 2)}), {n},
                "g" + std::to_string(n));
    m.set_hyperedge_flag(0, true);
    for (const auto& [u, v] : edges) {
        if (u == v) throw input_error("graph edges exclude loops");
        if (!m.holds(0, {u, v})) {
            m.add_tuple(0, {u, v});
            m.add_tuple(0, {v, u});
        }
    }
    return m;
}

Structure cycle_structure(int n) {
    if (n < 3) throw input_error("cycle needs at least 3 vertices");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    Structure m = graph_structure(n, edges);
    m.set_name("c" + std::to_string(n));
    return m;
}

Structure complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    Structure m = graph_structure(n, edges);
    m.set_name("k" + std::to_string(n));
    return m;
}

Structure path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    Structure m = graph_structure(n, edges);
    m.set_name("p" + std::to_string(n));
    return m;
}

Structure set_structure(int n) {
    if (n < 1) throw input_error("set size must be at least 1");
    return Structure(Signature::single_sorted({}), {n}, "set" + std::to_string(n));
}

std::vector<Structure> all_graphs(int n) {
    if (n < 1) throw input_error("graph size must be at least 1");
    std::vector<Structure> layer = {graph_structure(1, {})};
    for (int size = 2; size <= n; ++size) {
        std::map<std::string, Structure> next;
        for (const auto& g : layer) {
            int v = size - 1;
            for (unsigned mask = 0; mask < (1u << v); ++mask) {
                std::vector<std::pair<int, int>> edges;
                for (const auto& t : g.tuples(0))
                    if (t[0] < t[1]) edges.emplace_back(t[0], t[1]);
                for (int u = 0; u < v; ++u)
                    if (mask & (1u << u)) edges.emplace_back(u, v);
                Structure h = graph_structure(size, edges);
                std::string key = canonical_key(h);
                next.emplace(std::move(key), std::move(h));
            }
        }
        layer.clear();
        for (auto& [key, g] : next) layer.push_back(std::move(g));
        std::sort(layer.begin(), layer.end(), structure_less);
    }
    std::sort(layer.begin(), layer.end(), structure_less);
    return layer;
}

ClassFragment generate_fragment(const std::string& kind, int max_size) {
    if (max_size < 1) throw input_error("fragment size bound must be at least 1");
    if (kind == "linear_orders") {
        ClassFragment f(chain_structure(1).signature(), max_size);
        for (int n = 1; n <= max_size; ++n) f.add(chain_structure(n));
        return f;
    }
    if (kind == "graphs") {
        ClassFragment f(graph_structure(1, {}).signature(), max_size);
        for (int n = 1; n <= max_size; ++n)
            for (const auto& g : all_graphs(n)) f.add(g);
        return f;
    }
    if (kind == "sets") {
        ClassFragment f(set_structure(1).signature(), max_size);
        for (int n = 1; n <= max_size; ++n) f.add(set_structure(n));
        return f;
    }
    throw input_error("unknown fragment generator: " + kind);
}

ClassFragment fragment_from_json(const nlohmann::ordered_json& j,
                                 const std::string& base_dir) {
    try {
        if (j.contains("generator"))
            return generate_fragment(j.at("generator").get<std::string>(),
                                     j.at("max_size").get<int>());
        if (!j.contains("members") || j["members"].empty())
            throw input_error("fragment manifest needs \"members\" or \"generator\"");
        std::vector<Structure> members;
        for (const auto& entry : j["members"]) {
            std::filesystem::path p(entry.get<std::string>());
            if (p.is_relative() && !base_dir.empty())
                p = std::filesystem::path(base_dir) / p;
            members.push_back(load_structure(p.string()));
        }
        int bound = 0;
        if (j.contains("bound")) bound = j["bound"].get<int>();
        for (const auto& m : members) bound = std::max(bound, m.total_size());
        ClassFragment f(members.front().signature(), bound);
        for (const auto& m : members) f.add(m);
        f.sort_members();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("invalid fragment manifest: ") + e.what());
    }
}

ClassFragment fragment_from_file(const std::string& path) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid fragment manifest " + path + ": " + e.what());
    }
    return fragment_from_json(j, std::filesystem::path(path).parent_path().string());
}

} // namespace fmlab
