#include "fmlab/structure_io.hpp"

#include <fstream>
#include <sstream>

#include "fmlab/errors.hpp"

namespace fmlab {

ordered_json structure_to_json(const Structure& m) {
    const Signature& sig = m.signature();
    ordered_json j;
    j["name"] = m.name();
    ordered_json sorts = ordered_json::object();
    for (int s = 0; s < sig.sort_count(); ++s)
        sorts[sig.sorts()[static_cast<size_t>(s)]] = m.sort_size(s);
    j["sorts"] = sorts;

    ordered_json rel_syms = ordered_json::array();
    for (const auto& r : sig.relations()) {
        ordered_json e;
        e["name"] = r.name;
        e["arity"] = r.arity;
        ordered_json ss = ordered_json::array();
        for (int s : r.sorts) ss.push_back(sig.sorts()[static_cast<size_t>(s)]);
        e["sorts"] = ss;
        rel_syms.push_back(e);
    }
    ordered_json fn_syms = ordered_json::array();
    for (const auto& f : sig.functions()) {
        ordered_json e;
        e["name"] = f.name;
        e["arity"] = f.arity;
        ordered_json ss = ordered_json::array();
        for (int s : f.arg_sorts) ss.push_back(sig.sorts()[static_cast<size_t>(s)]);
        e["sorts"] = ss;
        e["result"] = sig.sorts()[static_cast<size_t>(f.result_sort)];
        fn_syms.push_back(e);
    }
    j["signature"] = {{"relations", rel_syms}, {"functions", fn_syms}};

    ordered_json rels = ordered_json::object();
    for (int r = 0; r < sig.relation_count(); ++r)
        rels[sig.relations()[static_cast<size_t>(r)].name] = m.tuples(r);
    j["relations"] = rels;

    if (sig.function_count() > 0) {
        ordered_json fns = ordered_json::object();
        for (int f = 0; f < sig.function_count(); ++f)
            fns[sig.functions()[static_cast<size_t>(f)].name] = {
                {"table", m.function_table(f)}};
        j["functions"] = fns;
    }

    ordered_json hyper = ordered_json::array();
    for (int r = 0; r < sig.relation_count(); ++r)
        if (m.hyperedge_flag(r))
            hyper.push_back(sig.relations()[static_cast<size_t>(r)].name);
    if (!hyper.empty()) j["hyperedges"] = hyper;
    return j;
}

namespace {

int sort_of(const Signature& partial, const std::vector<std::string>& names,
            const std::string& name) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    (void)partial;
    throw input_error("structure file references undeclared sort: " + name);
}

} // namespace

Structure structure_from_json(const ordered_json& j) {
    if (!j.is_object()) throw input_error("structure file must hold a JSON object");

    std::vector<std::string> sort_names;
    std::vector<int> sort_sizes;
    if (j.contains("sorts")) {
        if (!j["sorts"].is_object()) throw input_error("\"sorts\" must be an object");
        for (auto it = j["sorts"].begin(); it != j["sorts"].end(); ++it) {
            sort_names.push_back(it.key());
            sort_sizes.push_back(it.value().get<int>());
        }
    } else {
        sort_names = {"main"};
        if (!j.contains("size"))
            throw input_error("single-sorted structure file needs \"size\"");
        sort_sizes = {j["size"].get<int>()};
    }

    std::vector<RelationSymbol> rel_syms;
    std::vector<FunctionSymbol> fn_syms;
    if (j.contains("signature")) {
        const auto& sig_j = j["signature"];
        if (sig_j.contains("relations")) {
            for (const auto& e : sig_j["relations"]) {
                RelationSymbol r;
                r.name = e.at("name").get<std::string>();
                r.arity = e.at("arity").get<int>();
                if (e.contains("sorts")) {
                    for (const auto& s : e["sorts"])
                        r.sorts.push_back(sort_of({}, sort_names, s.get<std::string>()));
                } else {
                    r.sorts.assign(static_cast<size_t>(r.arity), 0);
                }
                rel_syms.push_back(std::move(r));
            }
        }
        if (sig_j.contains("functions")) {
            for (const auto& e : sig_j["functions"]) {
                FunctionSymbol f;
                f.name = e.at("name").get<std::string>();
                f.arity = e.at("arity").get<int>();
                if (e.contains("sorts")) {
                    for (const auto& s : e["sorts"])
                        f.arg_sorts.push_back(sort_of({}, sort_names, s.get<std::string>()));
                } else {
                    f.arg_sorts.assign(static_cast<size_t>(f.arity), 0);
                }
                f.result_sort =
                    e.contains("result") ? sort_of({}, sort_names, e["result"].get<std::string>()) : 0;
                fn_syms.push_back(std::move(f));
            }
        }
    }

    Signature sig(sort_names, rel_syms, fn_syms);
    Structure m(sig, sort_sizes, j.value("name", std::string()));

    if (j.contains("relations")) {
        for (auto it = j["relations"].begin(); it != j["relations"].end(); ++it) {
            int r = sig.relation_index(it.key());
            for (const auto& t : it.value()) {
                std::vector<int> tuple;
                for (const auto& v : t) tuple.push_back(v.get<int>());
                m.add_tuple(r, tuple);
            }
        }
    }
    if (j.contains("functions")) {
        for (auto it = j["functions"].begin(); it != j["functions"].end(); ++it) {
            int f = sig.function_index(it.key());
            const auto& spec = it.value();
            if (!spec.contains("table"))
                throw input_error("function " + it.key() + " needs a \"table\"");
            m.set_function_table(f, spec["table"].get<std::vector<int>>());
        }
    }
    if (j.contains("hyperedges")) {
        for (const auto& name : j["hyperedges"])
            m.set_hyperedge_flag(sig.relation_index(name.get<std::string>()), true);
    }
    m.validate();
    return m;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    out << text;
}

Structure load_structure(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid JSON in " + path + ": " + e.what());
    }
    try {
        return structure_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw input_error("malformed structure file " + path + ": " + e.what());
    }
}

void save_structure(const Structure& m, const std::string& path) {
    write_text_file(path, structure_to_json(m).dump(2) + "\n");
}

} // namespace fmlab
