#include "fmlab/indiscernibles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "fmlab/errors.hpp"
#include "fmlab/morphisms.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

PatternMode pattern_mode_from_string(const std::string& s) {
    if (s == "qftype") return PatternMode::qftype;
    if (s == "orbit") return PatternMode::orbit;
    throw input_error("unknown pattern mode: " + s);
}

std::string to_string(PatternMode m) {
    return m == PatternMode::qftype ? "qftype" : "orbit";
}

namespace {

void validate_sequence_shape(const Structure& index, const Structure& target, int k,
                             int sort, const std::vector<std::vector<int>>& map) {
    if (index.signature().sort_count() != 1)
        throw input_error("index structure must be single-sorted");
    if (k < 1) throw input_error("tuple length must be positive");
    if (sort < 0 || sort >= target.signature().sort_count())
        throw input_error("target sort out of range");
    if (static_cast<int>(map.size()) != index.sort_size(0))
        throw input_error("sequence map must cover every index element");
    for (const auto& t : map) {
        if (static_cast<int>(t.size()) != k)
            throw input_error("sequence tuples must have the declared length");
        for (int e : t)
            if (e < 0 || e >= target.sort_size(sort))
                throw input_error("sequence tuple entry out of range");
    }
}

// Tuples of distinct index elements, grouped by index type, arity ascending,
// tuples in lexicographic order within each arity.
std::vector<std::vector<std::vector<int>>> index_type_groups(const Structure& index,
                                                             int n_max) {
    int n = index.sort_size(0);
    if (n_max <= 0 || n_max > n) n_max = n;
    std::vector<std::vector<std::vector<int>>> groups;
    std::map<std::string, std::size_t> ids;
    std::vector<int> tuple;
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::function<void()> rec = [&]() {
        if (!tuple.empty()) {
            std::string ty = qf_type(index, tuple);
            auto [it, fresh] = ids.emplace(ty, groups.size());
            if (fresh) groups.emplace_back();
            groups[it->second].push_back(tuple);
        }
        if (static_cast<int>(tuple.size()) == n_max) return;
        for (int e = 0; e < n; ++e) {
            if (used[static_cast<size_t>(e)]) continue;
            used[static_cast<size_t>(e)] = 1;
            tuple.push_back(e);
            rec();
            tuple.pop_back();
            used[static_cast<size_t>(e)] = 0;
        }
    };
    rec();
    return groups;
}

struct PatternChecker {
    const Structure* target;
    int k;
    int sort;
    PatternMode mode;
    AutomorphismGroup aut; // populated in orbit mode

    std::string pattern(const std::vector<std::vector<int>>& map,
                        const std::vector<int>& idx_tuple) const {
        std::vector<int> flat;
        flat.reserve(idx_tuple.size() * static_cast<size_t>(k));
        for (int i : idx_tuple)
            for (int e : map[static_cast<size_t>(i)]) flat.push_back(e);
        if (mode == PatternMode::qftype) {
            std::vector<std::pair<int, int>> coords;
            coords.reserve(flat.size());
            for (int e : flat) coords.emplace_back(sort, e);
            return qf_type(*target, coords);
        }
        auto rep = orbit_min_tuple(aut, sort, flat);
        std::string out;
        for (int e : rep) out.push_back(static_cast<char>(e));
        return out;
    }

    // Returns indiscernibility over the precomputed groups; fills the witness
    // pair on failure.
    bool check(const std::vector<std::vector<std::vector<int>>>& groups,
               const std::vector<std::vector<int>>& map, std::vector<int>* first,
               std::vector<int>* second) const {
        for (const auto& g : groups) {
            if (g.size() < 2) continue;
            std::string base = pattern(map, g.front());
            for (std::size_t i = 1; i < g.size(); ++i) {
                if (pattern(map, g[i]) != base) {
                    if (first) *first = g.front();
                    if (second) *second = g[i];
                    return false;
                }
            }
        }
        return true;
    }
};

PatternChecker make_checker(const Structure& target, int k, int sort,
                            PatternMode mode) {
    PatternChecker c{&target, k, sort, mode, {}};
    if (mode == PatternMode::orbit) c.aut = automorphism_group(target);
    return c;
}

} // namespace

std::string sequence_pattern(const IndexedSequence& s, const AutomorphismGroup& aut,
                             const std::vector<int>& idx_tuple) {
    PatternChecker c{&s.target, s.k, s.sort, s.mode, aut};
    return c.pattern(s.map, idx_tuple);
}

IndiscResult is_indiscernible(const IndexedSequence& s, int n_max) {
    validate_sequence_shape(s.index, s.target, s.k, s.sort, s.map);
    auto groups = index_type_groups(s.index, n_max);
    auto checker = make_checker(s.target, s.k, s.sort, s.mode);
    IndiscResult r;
    r.indiscernible = checker.check(groups, s.map, &r.first, &r.second);
    return r;
}

CollapseReport collapse_scan(const Structure& index, const ReductSpec& reduct,
                             const Structure& target, const CollapseOptions& opts) {
    if (index.signature().sort_count() != 1)
        throw input_error("index structure must be single-sorted");
    Structure reduced = apply_reduct(index, reduct);
    auto groups_full = index_type_groups(index, opts.n_max);
    auto groups_red = index_type_groups(reduced, opts.n_max);
    auto checker = make_checker(target, opts.k, opts.sort, opts.mode);

    int n = index.sort_size(0);
    int msize = target.sort_size(opts.sort);
    int digits = n * opts.k;

    CollapseReport report;
    auto classify = [&](const std::vector<std::vector<int>>& map,
                        CollapseReport& into) {
        if (!checker.check(groups_full, map, nullptr, nullptr)) return;
        ++into.indiscernible_count;
        if (checker.check(groups_red, map, nullptr, nullptr)) return;
        ++into.uncollapsed_count;
        into.collapses = false;
        if (into.witnesses.size() < opts.max_witnesses) into.witnesses.push_back(map);
    };

    if (opts.samples > 0) {
        report.exhaustive = false;
        std::mt19937_64 rng(opts.seed);
        std::vector<std::vector<int>> map(static_cast<size_t>(n),
                                          std::vector<int>(static_cast<size_t>(opts.k)));
        for (std::uint64_t s = 0; s < opts.samples; ++s) {
            for (auto& t : map)
                for (auto& e : t)
                    e = static_cast<int>(rng() % static_cast<std::uint64_t>(msize));
            classify(map, report);
            ++report.scanned;
        }
        return report;
    }

    std::uint64_t total = 1;
    for (int i = 0; i < digits; ++i) {
        if (total > opts.budget / static_cast<std::uint64_t>(msize) + 1)
            throw budget_error("map space exceeds the exhaustive-scan budget");
        total *= static_cast<std::uint64_t>(msize);
    }
    if (total > opts.budget)
        throw budget_error("map space exceeds the exhaustive-scan budget");

    int workers = std::max(1, opts.threads);
    std::vector<CollapseReport> parts(static_cast<size_t>(workers));
    std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) /
                          static_cast<std::uint64_t>(workers);
    parallel_for(workers, workers, [&](int w) {
        std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        std::uint64_t hi = std::min(total, lo + chunk);
        auto& part = parts[static_cast<size_t>(w)];
        std::vector<std::vector<int>> map(static_cast<size_t>(n),
                                          std::vector<int>(static_cast<size_t>(opts.k)));
        for (std::uint64_t id = lo; id < hi; ++id) {
            std::uint64_t rest = id;
            for (int p = digits - 1; p >= 0; --p) {
                int value = static_cast<int>(rest % static_cast<std::uint64_t>(msize));
                rest /= static_cast<std::uint64_t>(msize);
                map[static_cast<size_t>(p / opts.k)][static_cast<size_t>(p % opts.k)] =
                    value;
            }
            classify(map, part);
            ++part.scanned;
        }
    });
    for (const auto& part : parts) {
        report.scanned += part.scanned;
        report.indiscernible_count += part.indiscernible_count;
        report.uncollapsed_count += part.uncollapsed_count;
        if (!part.collapses) report.collapses = false;
        for (const auto& w : part.witnesses)
            if (report.witnesses.size() < opts.max_witnesses)
                report.witnesses.push_back(w);
    }
    return report;
}

Structure irreflexivize(const Structure& m) {
    Structure out(m.signature(), m.sort_sizes(), m.name());
    const auto& rels = m.signature().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
        out.set_hyperedge_flag(static_cast<int>(r),
                               m.hyperedge_flag(static_cast<int>(r)));
        for (const auto& t : m.tuples(static_cast<int>(r))) {
            bool repeat = false;
            for (std::size_t i = 0; i < t.size() && !repeat; ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] == t[j]) {
                        repeat = true;
                        break;
                    }
            if (!repeat) out.add_tuple(static_cast<int>(r), t);
        }
    }
    for (int f = 0; f < m.signature().function_count(); ++f)
        out.set_function_table(f, m.function_table(f));
    return out;
}

ReductSpec arity_reduct(const Signature& sig, int arity) {
    ReductSpec spec;
    for (const auto& rel : sig.relations())
        if (rel.arity <= arity) spec.keep.push_back(rel.name);
    return spec;
}

bool two_level_graph_ok(int n, const std::vector<std::pair<int, int>>& edges) {
    bool rungs_only = true;
    bool levels_only = true;
    std::vector<std::uint64_t> adj(static_cast<size_t>(2 * n), 0);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        adj[static_cast<size_t>(u)] |= 1ull << v;
        adj[static_cast<size_t>(v)] |= 1ull << u;
        if (u % n != v % n) rungs_only = false;
        if (u / n != v / n) levels_only = false;
    }
    if (rungs_only || levels_only) return true;
    std::uint64_t nonisolated = 0;
    for (int u = 0; u < 2 * n; ++u)
        if (adj[static_cast<size_t>(u)]) nonisolated |= 1ull << u;
    if (!nonisolated) return true;
    std::uint64_t comp = nonisolated & (~nonisolated + 1); // lowest set bit
    for (;;) {
        std::uint64_t grown = comp;
        for (int u = 0; u < 2 * n; ++u)
            if (comp >> u & 1) grown |= adj[static_cast<size_t>(u)];
        if (grown == comp) break;
        comp = grown;
    }
    return comp == nonisolated;
}

ReasonableResult is_reasonable(const Structure& index, int budget_bits) {
    if (index.signature().sort_count() != 1)
        throw input_error("index structure must be single-sorted");
    int n = index.sort_size(0);
    ReasonableResult result;

    std::vector<std::vector<int>> tid(static_cast<size_t>(n),
                                      std::vector<int>(static_cast<size_t>(n)));
    std::map<std::string, int> type_ids;
    std::vector<std::pair<int, int>> type_rep;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::string ty = qf_type(index, std::vector<int>{i, j});
            auto [it, fresh] = type_ids.emplace(ty, static_cast<int>(type_rep.size()));
            if (fresh) type_rep.emplace_back(i, j);
            tid[static_cast<size_t>(i)][static_cast<size_t>(j)] = it->second;
        }
    int types = static_cast<int>(type_rep.size());
    result.pair_type_count = types;
    std::vector<int> rev(static_cast<size_t>(types));
    std::vector<char> diag(static_cast<size_t>(types), 0);
    for (int t = 0; t < types; ++t) {
        auto [i, j] = type_rep[static_cast<size_t>(t)];
        rev[static_cast<size_t>(t)] = tid[static_cast<size_t>(j)][static_cast<size_t>(i)];
        if (i == j) diag[static_cast<size_t>(t)] = 1;
    }

    // Free variables: orbits of (type, eps0, eps1) under simultaneous reversal,
    // with the loop-producing diagonal combinations pinned to "no edge".
    auto canon = [&](int t, int e0, int e1) {
        std::array<int, 3> a{t, e0, e1};
        std::array<int, 3> b{rev[static_cast<size_t>(t)], e1, e0};
        return std::min(a, b);
    };
    std::map<std::array<int, 3>, int> var_of;
    std::vector<std::array<int, 4>> var_rep;
    for (int t = 0; t < types; ++t)
        for (int e0 = 0; e0 < 2; ++e0)
            for (int e1 = 0; e1 < 2; ++e1) {
                if (diag[static_cast<size_t>(t)] && e0 == e1) continue;
                auto key = canon(t, e0, e1);
                if (var_of.emplace(key, static_cast<int>(var_rep.size())).second) {
                    auto [i, j] = type_rep[static_cast<size_t>(t)];
                    var_rep.push_back({i, j, e0, e1});
                }
            }
    int vars = static_cast<int>(var_rep.size());
    if (vars > budget_bits)
        throw budget_error("assignment space 2^" + std::to_string(vars) +
                           " exceeds the enumeration budget");

    // Per unordered vertex pair: which variable controls the edge (-1 = none).
    int verts = 2 * n;
    std::vector<std::vector<int>> edge_var(static_cast<size_t>(verts),
                                           std::vector<int>(static_cast<size_t>(verts), -1));
    for (int u = 0; u < verts; ++u)
        for (int v = u + 1; v < verts; ++v) {
            int e0 = u / n, i = u % n;
            int e1 = v / n, j = v % n;
            int t = tid[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (diag[static_cast<size_t>(t)] && e0 == e1) continue;
            edge_var[static_cast<size_t>(u)][static_cast<size_t>(v)] =
                var_of.at(canon(t, e0, e1));
        }

    std::uint64_t masks = 1ull << vars;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < verts; ++u)
            for (int v = u + 1; v < verts; ++v) {
                int var = edge_var[static_cast<size_t>(u)][static_cast<size_t>(v)];
                if (var >= 0 && (mask >> var & 1)) edges.emplace_back(u, v);
            }
        ++result.assignments_checked;
        if (!two_level_graph_ok(n, edges)) {
            result.reasonable = false;
            result.edges = std::move(edges);
            for (int var = 0; var < vars; ++var)
                if (mask >> var & 1)
                    result.rule.push_back(var_rep[static_cast<size_t>(var)]);
            return result;
        }
    }
    return result;
}

PrimitiveResult is_primitive(const Structure& index) {
    if (index.signature().sort_count() != 1)
        throw input_error("index structure must be single-sorted");
    int n = index.sort_size(0);
    auto aut = automorphism_group(index);
    PrimitiveResult result;
    result.aut_order = aut.order;
    if (n < 2) return result;

    std::vector<int> parent(static_cast<size_t>(n));
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
        return true;
    };

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            for (int x = 0; x < n; ++x) parent[static_cast<size_t>(x)] = x;
            unite(a, b);
            bool changed = true;
            while (changed) {
                changed = false;
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) {
                        if (find(u) != find(v)) continue;
                        for (const auto& g : aut.generators)
                            if (unite(g.apply(0, u), g.apply(0, v))) changed = true;
                    }
            }
            bool universal = true;
            for (int x = 1; x < n && universal; ++x)
                if (find(x) != find(0)) universal = false;
            if (!universal) {
                result.primitive = false;
                result.seed = {a, b};
                result.congruence.resize(static_cast<size_t>(n));
                std::map<int, int> relabel;
                for (int x = 0; x < n; ++x) {
                    auto [it, fresh] =
                        relabel.emplace(find(x), static_cast<int>(relabel.size()));
                    result.congruence[static_cast<size_t>(x)] = it->second;
                }
                return result;
            }
        }
    return result;
}

namespace {

std::string var_name(int i) { return "x" + std::to_string(i); }

std::vector<Formula> build_templates(const Signature& sig, int vars,
                                     const TemplateOptions& opts) {
    std::vector<Formula> atoms;
    for (const auto& rel : sig.relations()) {
        int q = rel.arity;
        std::vector<int> args(static_cast<size_t>(q), 0);
        for (;;) {
            std::vector<std::string> names;
            for (int a : args) names.push_back(var_name(a));
            atoms.push_back(Formula::atom(rel.name, names));
            int p = q - 1;
            while (p >= 0 && args[static_cast<size_t>(p)] == vars - 1) {
                args[static_cast<size_t>(p)] = 0;
                --p;
            }
            if (p < 0) break;
            ++args[static_cast<size_t>(p)];
        }
    }
    if (opts.include_equality)
        for (int i = 0; i < vars; ++i)
            for (int j = i + 1; j < vars; ++j)
                atoms.push_back(Formula::eq(var_name(i), var_name(j)));

    std::vector<Formula> literals = atoms;
    for (const auto& a : atoms) literals.push_back(Formula::neg(a));

    std::vector<Formula> out = literals;
    if (opts.max_literals >= 2) {
        for (std::size_t i = 0; i < literals.size(); ++i)
            for (std::size_t j = i + 1; j < literals.size(); ++j) {
                out.push_back(Formula::conj(literals[i], literals[j]));
                out.push_back(Formula::disj(literals[i], literals[j]));
            }
    }
    return out;
}

struct CompiledTemplate {
    Formula formula;
    Evaluator eval;
    std::vector<int> free_positions; // free var order -> template var index
};

std::vector<CompiledTemplate> compile_templates(const Structure& target,
                                                std::vector<Formula> templates) {
    std::vector<CompiledTemplate> out;
    out.reserve(templates.size());
    for (auto& f : templates) {
        Evaluator ev(target, f);
        std::vector<int> pos;
        for (const auto& [name, sort] : ev.free_vars())
            pos.push_back(std::stoi(name.substr(1)));
        out.push_back({std::move(f), std::move(ev), std::move(pos)});
    }
    return out;
}

bool template_matches(const CompiledTemplate& t, const std::vector<int>& values) {
    std::vector<int> assignment;
    assignment.reserve(t.free_positions.size());
    for (int p : t.free_positions) assignment.push_back(values[static_cast<size_t>(p)]);
    return t.eval.eval(assignment);
}

} // namespace

ConfigResult find_configuration(const Structure& target, const Structure& pattern,
                                int n, const TemplateOptions& opts) {
    if (n < 1 || n > 2) throw input_error("configuration dimension must be 1 or 2");
    if (target.signature().sort_count() != 1 || pattern.signature().sort_count() != 1)
        throw input_error("configuration search expects single-sorted structures");
    if (pattern.signature().function_count() > 0)
        throw input_error("pattern signature must be relational");

    int p = pattern.sort_size(0);
    int msize = target.sort_size(0);
    std::uint64_t tuple_space = 1;
    for (int i = 0; i < n; ++i) tuple_space *= static_cast<std::uint64_t>(msize);
    if (tuple_space < static_cast<std::uint64_t>(p)) return {};

    // One compiled template set per distinct variable count among relations.
    std::map<int, std::vector<CompiledTemplate>> by_vars;
    const auto& rels = pattern.signature().relations();
    for (const auto& rel : rels) {
        int vars = rel.arity * n;
        if (!by_vars.count(vars))
            by_vars.emplace(vars,
                            compile_templates(target, build_templates(target.signature(),
                                                                      vars, opts)));
    }

    ConfigResult result;
    auto decode = [&](std::uint64_t id) {
        std::vector<int> t(static_cast<size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            t[static_cast<size_t>(i)] = static_cast<int>(id % msize);
            id /= static_cast<std::uint64_t>(msize);
        }
        return t;
    };

    std::vector<std::uint64_t> chosen(static_cast<size_t>(p));
    std::vector<char> used(static_cast<size_t>(tuple_space), 0);
    std::vector<std::vector<int>> images(static_cast<size_t>(p));

    // For the current injection, find one matching template per relation.
    auto interpret = [&](std::vector<std::pair<std::string, std::string>>* out) {
        for (std::size_t ri = 0; ri < rels.size(); ++ri) {
            const auto& rel = rels[ri];
            int arity = rel.arity;
            const auto& templates = by_vars.at(arity * n);
            std::vector<int> tuple(static_cast<size_t>(arity), 0);
            const CompiledTemplate* match = nullptr;
            for (const auto& t : templates) {
                if (++result.steps > opts.budget)
                    throw budget_error("configuration search budget exhausted");
                bool ok = true;
                std::fill(tuple.begin(), tuple.end(), 0);
                for (;;) {
                    std::vector<int> values;
                    values.reserve(static_cast<size_t>(arity * n));
                    for (int e : tuple)
                        for (int c : images[static_cast<size_t>(e)]) values.push_back(c);
                    bool fact = pattern.holds(static_cast<int>(ri), tuple);
                    if (template_matches(t, values) != fact) {
                        ok = false;
                        break;
                    }
                    int pos = arity - 1;
                    while (pos >= 0 && tuple[static_cast<size_t>(pos)] == p - 1) {
                        tuple[static_cast<size_t>(pos)] = 0;
                        --pos;
                    }
                    if (pos < 0) break;
                    ++tuple[static_cast<size_t>(pos)];
                }
                if (ok) {
                    match = &t;
                    break;
                }
            }
            if (!match) return false;
            if (out) out->emplace_back(rel.name, format_formula(match->formula));
        }
        return true;
    };

    std::function<bool(int)> place = [&](int e) -> bool {
        if (e == p) {
            std::vector<std::pair<std::string, std::string>> interp;
            if (!interpret(&interp)) return false;
            result.found = true;
            result.injection = images;
            result.interpretation = std::move(interp);
            return true;
        }
        for (std::uint64_t id = 0; id < tuple_space; ++id) {
            if (used[static_cast<size_t>(id)]) continue;
            used[static_cast<size_t>(id)] = 1;
            images[static_cast<size_t>(e)] = decode(id);
            if (place(e + 1)) return true;
            used[static_cast<size_t>(id)] = 0;
        }
        return false;
    };
    place(0);
    result.exhausted = !result.found;
    return result;
}

IpResult find_ip_pattern(const Structure& m, const std::string& rel, int n, int d,
                         const IpOptions& opts) {
    if (m.signature().sort_count() != 1)
        throw input_error("independence search expects a single-sorted structure");
    if (n < 1 || d < 1) throw input_error("depth and arity must be positive");
    int r = m.signature().relation_index_opt(rel);
    if (r < 0) throw input_error("unknown relation: " + rel);
    if (m.signature().relations()[static_cast<size_t>(r)].arity != n + 1)
        throw input_error("relation " + rel + " must have arity " +
                          std::to_string(n + 1));
    int cells = 1;
    for (int j = 0; j < n; ++j) {
        cells *= d;
        if (cells > 20) throw input_error("cell grid too large: d^n must be at most 20");
    }
    int msize = m.sort_size(0);
    int slots = n * d;
    std::uint64_t grids = 1;
    for (int i = 0; i < slots; ++i) {
        if (grids > opts.budget / static_cast<std::uint64_t>(msize) + 1)
            throw budget_error("independence search budget exhausted");
        grids *= static_cast<std::uint64_t>(msize);
    }
    if (grids > opts.budget)
        throw budget_error("independence search budget exhausted");

    std::uint64_t masks = 1ull << cells;
    IpResult result;
    std::vector<int> flat(static_cast<size_t>(slots), 0);
    std::vector<int> args(static_cast<size_t>(n + 1));
    std::vector<int> cover(static_cast<size_t>(masks));
    for (std::uint64_t grid = 0; grid < grids; ++grid) {
        std::uint64_t rest = grid;
        for (int i = slots - 1; i >= 0; --i) {
            flat[static_cast<size_t>(i)] = static_cast<int>(rest % msize);
            rest /= static_cast<std::uint64_t>(msize);
        }
        ++result.grids;
        if (opts.injective) {
            bool dup = false;
            for (int i = 0; i < slots && !dup; ++i)
                for (int j = i + 1; j < slots; ++j)
                    if (flat[static_cast<size_t>(i)] == flat[static_cast<size_t>(j)]) {
                        dup = true;
                        break;
                    }
            if (dup) continue;
        }
        std::fill(cover.begin(), cover.end(), -1);
        std::uint64_t seen = 0;
        for (int b = 0; b < msize; ++b) {
            if (opts.injective &&
                std::find(flat.begin(), flat.end(), b) != flat.end())
                continue;
            std::uint64_t trace = 0;
            for (int cell = 0; cell < cells; ++cell) {
                int rest_cell = cell;
                args[0] = b;
                for (int j = n - 1; j >= 0; --j) {
                    int ij = rest_cell % d;
                    rest_cell /= d;
                    args[static_cast<size_t>(j + 1)] =
                        flat[static_cast<size_t>(j * d + ij)];
                }
                if (m.holds(r, args)) trace |= 1ull << cell;
            }
            if (cover[static_cast<size_t>(trace)] < 0) {
                cover[static_cast<size_t>(trace)] = b;
                ++seen;
            }
        }
        if (seen == masks) {
            result.found = true;
            result.a.assign(static_cast<size_t>(n),
                            std::vector<int>(static_cast<size_t>(d)));
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < d; ++i)
                    result.a[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                        flat[static_cast<size_t>(j * d + i)];
            result.b.assign(cover.begin(), cover.end());
            return result;
        }
    }
    result.exhausted = true;
    return result;
}

} // namespace fmlab
