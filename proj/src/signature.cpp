#include "fmlab/signature.hpp"

#include <set>

#include "fmlab/errors.hpp"

namespace fmlab {

Signature::Signature() : sorts_{"main"} {}

Signature::Signature(std::vector<std::string> sorts,
                     std::vector<RelationSymbol> relations,
                     std::vector<FunctionSymbol> functions)
    : sorts_(std::move(sorts)),
      relations_(std::move(relations)),
      functions_(std::move(functions)) {
    validate();
}

void Signature::validate() const {
    if (sorts_.empty()) throw input_error("signature needs at least one sort");
    std::set<std::string> seen;
    for (const auto& s : sorts_)
        if (!seen.insert(s).second) throw input_error("duplicate sort name: " + s);
    std::set<std::string> symbols;
    auto check_sort = [&](int s, const std::string& owner) {
        if (s < 0 || s >= sort_count())
            throw input_error("symbol " + owner + " references undeclared sort");
    };
    // The 8-coordinate cap keeps packed tuples within one 64-bit key.
    for (const auto& r : relations_) {
        if (!symbols.insert(r.name).second)
            throw input_error("duplicate symbol name: " + r.name);
        if (r.arity <= 0 || r.arity > 8 || static_cast<int>(r.sorts.size()) != r.arity)
            throw input_error("relation " + r.name + " has inconsistent arity");
        for (int s : r.sorts) check_sort(s, r.name);
    }
    for (const auto& f : functions_) {
        if (!symbols.insert(f.name).second)
            throw input_error("duplicate symbol name: " + f.name);
        if (f.arity <= 0 || f.arity > 8 || static_cast<int>(f.arg_sorts.size()) != f.arity)
            throw input_error("function " + f.name + " has inconsistent arity");
        for (int s : f.arg_sorts) check_sort(s, f.name);
        check_sort(f.result_sort, f.name);
    }
}

int Signature::sort_index_opt(const std::string& name) const {
    for (int i = 0; i < sort_count(); ++i)
        if (sorts_[i] == name) return i;
    return -1;
}

int Signature::relation_index_opt(const std::string& name) const {
    for (int i = 0; i < relation_count(); ++i)
        if (relations_[i].name == name) return i;
    return -1;
}

int Signature::function_index_opt(const std::string& name) const {
    for (int i = 0; i < function_count(); ++i)
        if (functions_[i].name == name) return i;
    return -1;
}

int Signature::sort_index(const std::string& name) const {
    int i = sort_index_opt(name);
    if (i < 0) throw input_error("unknown sort: " + name);
    return i;
}

int Signature::relation_index(const std::string& name) const {
    int i = relation_index_opt(name);
    if (i < 0) throw input_error("unknown relation symbol: " + name);
    return i;
}

int Signature::function_index(const std::string& name) const {
    int i = function_index_opt(name);
    if (i < 0) throw input_error("unknown function symbol: " + name);
    return i;
}

bool Signature::operator==(const Signature& other) const {
    if (sorts_ != other.sorts_) return false;
    if (relations_.size() != other.relations_.size()) return false;
    for (size_t i = 0; i < relations_.size(); ++i) {
        const auto& a = relations_[i];
        const auto& b = other.relations_[i];
        if (a.name != b.name || a.arity != b.arity || a.sorts != b.sorts) return false;
    }
    if (functions_.size() != other.functions_.size()) return false;
    for (size_t i = 0; i < functions_.size(); ++i) {
        const auto& a = functions_[i];
        const auto& b = other.functions_[i];
        if (a.name != b.name || a.arity != b.arity || a.arg_sorts != b.arg_sorts ||
            a.result_sort != b.result_sort)
            return false;
    }
    return true;
}

Signature Signature::single_sorted(std::vector<RelationSymbol> relations) {
    return Signature({"main"}, std::move(relations));
}

RelationSymbol rel_symbol(const std::string& name, int arity, int sort) {
    RelationSymbol r;
    r.name = name;
    r.arity = arity;
    r.sorts.assign(static_cast<size_t>(arity), sort);
    return r;
}

} // namespace fmlab
