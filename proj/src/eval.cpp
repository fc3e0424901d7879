#include "fmlab/eval.hpp"

#include <algorithm>
#include <functional>

#include "fmlab/errors.hpp"
#include "fmlab/structure_io.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

Evaluator::Evaluator(const Structure& m, const Formula& f) : m_(&m) {
    free_ = free_variables(f, m.signature());
    std::map<std::string, int> slots;
    for (const auto& [name, sort] : free_) {
        slots[name] = slot_count_++;
        free_slots_.push_back(slots[name]);
        (void)sort;
    }
    root_ = compile(f, slots);
}

int Evaluator::compile(const Formula& f, std::map<std::string, int>& slots) {
    Node n;
    n.kind = f.kind;
    switch (f.kind) {
        case FormulaKind::atom: {
            n.rel = m_->signature().relation_index(f.symbol);
            for (const auto& v : f.args) {
                auto it = slots.find(v);
                if (it == slots.end())
                    throw input_error("unbound variable in formula: " + v);
                n.arg_slots.push_back(it->second);
            }
            break;
        }
        case FormulaKind::eq: {
            for (const auto& v : f.args) {
                auto it = slots.find(v);
                if (it == slots.end())
                    throw input_error("unbound variable in formula: " + v);
                n.arg_slots.push_back(it->second);
            }
            break;
        }
        case FormulaKind::forall:
        case FormulaKind::exists: {
            n.slot = slot_count_++;
            // The sort the variable ranges over: annotation, else inferred from
            // a full sort pass; free_variables already validated consistency,
            // so re-derive cheaply from the annotation or default.
            n.sort = f.sort.empty() ? -2 : m_->signature().sort_index(f.sort);
            slots[f.symbol] = n.slot;
            int idx = static_cast<int>(nodes_.size());
            nodes_.push_back(n);
            int child = compile(f.children[0], slots);
            nodes_[static_cast<size_t>(idx)].left = child;
            if (nodes_[static_cast<size_t>(idx)].sort == -2) {
                // Infer from first atom use inside the body.
                std::function<int(const Formula&)> infer = [&](const Formula& g) -> int {
                    if (g.kind == FormulaKind::atom) {
                        int r = m_->signature().relation_index(g.symbol);
                        const auto& sym = m_->signature().relations()[static_cast<size_t>(r)];
                        for (size_t i = 0; i < g.args.size(); ++i)
                            if (g.args[i] == f.symbol) return sym.sorts[i];
                    }
                    for (const auto& c : g.children) {
                        if ((c.kind == FormulaKind::forall || c.kind == FormulaKind::exists) &&
                            c.symbol == f.symbol)
                            continue;
                        int s = infer(c);
                        if (s >= 0) return s;
                    }
                    return -1;
                };
                int s = infer(f.children[0]);
                nodes_[static_cast<size_t>(idx)].sort = s >= 0 ? s : 0;
            }
            slots.erase(f.symbol);
            return idx;
        }
        default:
            break;
    }
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    if (!f.children.empty()) {
        int left = compile(f.children[0], slots);
        nodes_[static_cast<size_t>(idx)].left = left;
        if (f.children.size() > 1) {
            int right = compile(f.children[1], slots);
            nodes_[static_cast<size_t>(idx)].right = right;
        }
    }
    return idx;
}

bool Evaluator::eval_node(int idx, std::vector<int>& env) const {
    const Node& n = nodes_[static_cast<size_t>(idx)];
    switch (n.kind) {
        case FormulaKind::atom: {
            const auto& keys = m_->tuple_keys(n.rel);
            std::uint64_t key = 0;
            for (int s : n.arg_slots)
                key = (key << 8) | static_cast<std::uint64_t>(env[static_cast<size_t>(s)] & 0xff);
            return std::binary_search(keys.begin(), keys.end(), key);
        }
        case FormulaKind::eq:
            return env[static_cast<size_t>(n.arg_slots[0])] ==
                   env[static_cast<size_t>(n.arg_slots[1])];
        case FormulaKind::neg:
            return !eval_node(n.left, env);
        case FormulaKind::conj:
            return eval_node(n.left, env) && eval_node(n.right, env);
        case FormulaKind::disj:
            return eval_node(n.left, env) || eval_node(n.right, env);
        case FormulaKind::implies:
            return !eval_node(n.left, env) || eval_node(n.right, env);
        case FormulaKind::iff:
            return eval_node(n.left, env) == eval_node(n.right, env);
        case FormulaKind::forall: {
            int size = m_->sort_size(n.sort);
            for (int v = 0; v < size; ++v) {
                env[static_cast<size_t>(n.slot)] = v;
                if (!eval_node(n.left, env)) return false;
            }
            return true;
        }
        case FormulaKind::exists: {
            int size = m_->sort_size(n.sort);
            for (int v = 0; v < size; ++v) {
                env[static_cast<size_t>(n.slot)] = v;
                if (eval_node(n.left, env)) return true;
            }
            return false;
        }
    }
    return false;
}

bool Evaluator::eval(const std::vector<int>& free_assignment) const {
    if (free_assignment.size() != free_.size())
        throw input_error("expected " + std::to_string(free_.size()) +
                          " free-variable values");
    std::vector<int> env(static_cast<size_t>(slot_count_), 0);
    for (size_t i = 0; i < free_slots_.size(); ++i) {
        int v = free_assignment[i];
        int sort = free_[i].second;
        if (v < 0 || v >= m_->sort_size(sort))
            throw input_error("assignment for " + free_[i].first + " is out of range");
        env[static_cast<size_t>(free_slots_[i])] = v;
    }
    return eval_node(root_, env);
}

bool evaluate(const Structure& m, const Formula& f,
              const std::map<std::string, int>& assignment) {
    Evaluator ev(m, f);
    std::vector<int> values;
    for (const auto& [name, sort] : ev.free_vars()) {
        auto it = assignment.find(name);
        if (it == assignment.end())
            throw input_error("missing assignment for free variable " + name);
        values.push_back(it->second);
        (void)sort;
    }
    return ev.eval(values);
}

std::optional<std::map<std::string, int>> find_counterexample(const Structure& m,
                                                              const Formula& f) {
    // Split the outermost universal prefix, then scan its assignments.
    std::vector<std::pair<std::string, std::string>> prefix; // (var, sort name)
    const Formula* body = &f;
    while (body->kind == FormulaKind::forall) {
        prefix.emplace_back(body->symbol, body->sort);
        body = &body->children[0];
    }
    if (prefix.empty()) return evaluate(m, f) ? std::nullopt
                                              : std::make_optional(std::map<std::string, int>{});

    Evaluator ev(m, *body);
    const auto& free_list = ev.free_vars();
    std::vector<int> ranges;
    std::vector<int> positions; // index into free_list for each prefix var
    for (const auto& [name, sort] : free_list) {
        (void)name;
        ranges.push_back(m.sort_size(sort));
    }
    (void)positions;
    std::optional<std::map<std::string, int>> found;
    for_each_tuple(ranges, [&](const std::vector<int>& tuple) {
        if (ev.eval(tuple)) return true;
        std::map<std::string, int> witness;
        for (size_t i = 0; i < free_list.size(); ++i) witness[free_list[i].first] = tuple[i];
        found = std::move(witness);
        return false;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Quantifier-free types

std::string qf_type(const Structure& m, const std::vector<std::pair<int, int>>& tuple) {
    const Signature& sig = m.signature();
    std::string out;
    auto push16 = [&out](int v) {
        out.push_back(static_cast<char>((v >> 8) & 0xff));
        out.push_back(static_cast<char>(v & 0xff));
    };

    // Coordinate sorts and equality partition.
    for (const auto& [sort, elem] : tuple) {
        if (sort < 0 || sort >= sig.sort_count() || elem < 0 || elem >= m.sort_size(sort))
            throw input_error("qf_type tuple entry out of range");
        push16(sort);
    }
    out.push_back('|');
    for (size_t i = 0; i < tuple.size(); ++i) {
        int first = static_cast<int>(i);
        for (size_t j = 0; j < i; ++j)
            if (tuple[j] == tuple[i]) {
                first = static_cast<int>(j);
                break;
            }
        push16(first);
    }
    out.push_back('|');

    // Relation facts over coordinates, with polarity.
    int k = static_cast<int>(tuple.size());
    for (int r = 0; r < sig.relation_count(); ++r) {
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        push16(0x7e00 + r);
        std::vector<int> ranges(static_cast<size_t>(sym.arity), k);
        std::vector<int> args(static_cast<size_t>(sym.arity));
        for_each_tuple(ranges, [&](const std::vector<int>& idx) {
            for (int i = 0; i < sym.arity; ++i) {
                if (tuple[static_cast<size_t>(idx[static_cast<size_t>(i)])].first !=
                    sym.sorts[static_cast<size_t>(i)])
                    return true; // sort-incorrect coordinate combination
                args[static_cast<size_t>(i)] =
                    tuple[static_cast<size_t>(idx[static_cast<size_t>(i)])].second;
            }
            out.push_back(m.holds(r, args) ? '+' : '-');
            return true;
        });
    }

    if (sig.function_count() == 0) return out;

    // Function closure: reach values breadth-first, in deterministic rounds.
    out.push_back('|');
    std::vector<std::pair<int, int>> reached;
    std::vector<int> coord_rid(tuple.size());
    auto rid_of = [&](int sort, int elem) {
        for (size_t i = 0; i < reached.size(); ++i)
            if (reached[i].first == sort && reached[i].second == elem)
                return static_cast<int>(i);
        return -1;
    };
    for (size_t i = 0; i < tuple.size(); ++i) {
        int rid = rid_of(tuple[i].first, tuple[i].second);
        if (rid < 0) {
            rid = static_cast<int>(reached.size());
            reached.push_back(tuple[i]);
        }
        coord_rid[i] = rid;
    }
    bool grew = true;
    while (grew) {
        grew = false;
        size_t snapshot = reached.size();
        for (int f = 0; f < sig.function_count(); ++f) {
            const auto& sym = sig.functions()[static_cast<size_t>(f)];
            std::vector<int> ranges(static_cast<size_t>(sym.arity),
                                    static_cast<int>(snapshot));
            std::vector<int> args(static_cast<size_t>(sym.arity));
            for_each_tuple(ranges, [&](const std::vector<int>& pick) {
                for (int i = 0; i < sym.arity; ++i) {
                    const auto& entry = reached[static_cast<size_t>(pick[static_cast<size_t>(i)])];
                    if (entry.first != sym.arg_sorts[static_cast<size_t>(i)]) return true;
                    args[static_cast<size_t>(i)] = entry.second;
                }
                int v = m.function_value(f, args);
                if (v != undet && rid_of(sym.result_sort, v) < 0) {
                    reached.emplace_back(sym.result_sort, v);
                    grew = true;
                }
                return true;
            });
        }
    }

    // Coordinate -> reached-id map, then the generated substructure's facts.
    for (int rid : coord_rid) push16(rid);
    out.push_back('|');
    int nreach = static_cast<int>(reached.size());
    for (int f = 0; f < sig.function_count(); ++f) {
        const auto& sym = sig.functions()[static_cast<size_t>(f)];
        push16(0x7f00 + f);
        std::vector<int> ranges(static_cast<size_t>(sym.arity), nreach);
        std::vector<int> args(static_cast<size_t>(sym.arity));
        for_each_tuple(ranges, [&](const std::vector<int>& pick) {
            for (int i = 0; i < sym.arity; ++i) {
                const auto& entry = reached[static_cast<size_t>(pick[static_cast<size_t>(i)])];
                if (entry.first != sym.arg_sorts[static_cast<size_t>(i)]) return true;
                args[static_cast<size_t>(i)] = entry.second;
            }
            int v = m.function_value(f, args);
            push16(v == undet ? 0 : rid_of(sym.result_sort, v) + 1);
            return true;
        });
    }
    for (int r = 0; r < sig.relation_count(); ++r) {
        const auto& sym = sig.relations()[static_cast<size_t>(r)];
        push16(0x7e00 + r);
        std::vector<int> ranges(static_cast<size_t>(sym.arity), nreach);
        std::vector<int> args(static_cast<size_t>(sym.arity));
        for_each_tuple(ranges, [&](const std::vector<int>& pick) {
            for (int i = 0; i < sym.arity; ++i) {
                const auto& entry = reached[static_cast<size_t>(pick[static_cast<size_t>(i)])];
                if (entry.first != sym.sorts[static_cast<size_t>(i)]) return true;
                args[static_cast<size_t>(i)] = entry.second;
            }
            out.push_back(m.holds(r, args) ? '+' : '-');
            return true;
        });
    }
    return out;
}

std::string qf_type(const Structure& m, const std::vector<int>& tuple, int sort) {
    std::vector<std::pair<int, int>> full;
    full.reserve(tuple.size());
    for (int e : tuple) full.emplace_back(sort, e);
    return qf_type(m, full);
}

Structure add_defined_relation(const Structure& m, const std::string& name,
                               const Formula& f) {
    const Signature& sig = m.signature();
    if (sig.relation_index_opt(name) >= 0 || sig.function_index_opt(name) >= 0)
        throw input_error("symbol " + name + " already exists in the signature");
    Evaluator ev(m, f);
    RelationSymbol sym;
    sym.name = name;
    sym.arity = static_cast<int>(ev.free_vars().size());
    if (sym.arity == 0) throw input_error("defined relation needs free variables");
    for (const auto& [var, sort] : ev.free_vars()) {
        (void)var;
        sym.sorts.push_back(sort);
    }
    auto rels = sig.relations();
    rels.push_back(sym);
    Signature nsig(sig.sorts(), rels, sig.functions());
    Structure out(nsig, m.sort_sizes(), m.name());
    for (int r = 0; r < sig.relation_count(); ++r) {
        out.set_hyperedge_flag(r, m.hyperedge_flag(r));
        for (const auto& t : m.tuples(r)) out.add_tuple(r, t);
    }
    for (int fn = 0; fn < sig.function_count(); ++fn)
        out.set_function_table(fn, m.function_table(fn));
    int new_rel = nsig.relation_index(name);
    std::vector<int> ranges;
    for (int s : sym.sorts) ranges.push_back(m.sort_size(s));
    for_each_tuple(ranges, [&](const std::vector<int>& args) {
        if (ev.eval(args)) out.add_tuple(new_rel, args);
        return true;
    });
    return out;
}

ReductSpec reduct_from_json(const nlohmann::ordered_json& j) {
    ReductSpec spec;
    if (j.contains("keep"))
        for (const auto& name : j["keep"]) spec.keep.push_back(name.get<std::string>());
    if (j.contains("define"))
        for (const auto& d : j["define"])
            spec.define.push_back({d.at("name").get<std::string>(),
                                   parse_formula(d.at("formula").get<std::string>())});
    return spec;
}

ReductSpec reduct_from_file(const std::string& path) {
    try {
        return reduct_from_json(nlohmann::ordered_json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid reduct spec " + path + ": " + e.what());
    }
}

Structure apply_reduct(const Structure& m, const ReductSpec& spec) {
    const Signature& sig = m.signature();
    std::vector<RelationSymbol> rels;
    std::vector<FunctionSymbol> fns;
    std::vector<int> kept_rels, kept_fns;
    for (const auto& name : spec.keep) {
        int r = sig.relation_index_opt(name);
        if (r >= 0) {
            rels.push_back(sig.relations()[static_cast<size_t>(r)]);
            kept_rels.push_back(r);
            continue;
        }
        int f = sig.function_index_opt(name);
        if (f >= 0) {
            fns.push_back(sig.functions()[static_cast<size_t>(f)]);
            kept_fns.push_back(f);
            continue;
        }
        throw input_error("reduct keeps unknown symbol: " + name);
    }
    Structure base = m;
    for (const auto& d : spec.define) base = add_defined_relation(base, d.name, d.formula);
    for (const auto& d : spec.define) {
        int r = base.signature().relation_index(d.name);
        rels.push_back(base.signature().relations()[static_cast<size_t>(r)]);
    }
    Signature nsig(sig.sorts(), rels, fns);
    Structure out(nsig, m.sort_sizes(), m.name());
    int at = 0;
    for (int r : kept_rels) {
        out.set_hyperedge_flag(at, m.hyperedge_flag(r));
        for (const auto& t : m.tuples(r)) out.add_tuple(at, t);
        ++at;
    }
    for (const auto& d : spec.define) {
        int r = base.signature().relation_index(d.name);
        for (const auto& t : base.tuples(r)) out.add_tuple(at, t);
        ++at;
    }
    for (size_t i = 0; i < kept_fns.size(); ++i)
        out.set_function_table(static_cast<int>(i), m.function_table(kept_fns[i]));
    return out;
}

} // namespace fmlab
