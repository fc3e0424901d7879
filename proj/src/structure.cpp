#include "fmlab/structure.hpp"

#include <algorithm>
#include <numeric>

#include "fmlab/errors.hpp"

namespace fmlab {

Structure::Structure(Signature sig, std::vector<int> sort_sizes, std::string name)
    : sig_(std::move(sig)), sizes_(std::move(sort_sizes)), name_(std::move(name)) {
    if (static_cast<int>(sizes_.size()) != sig_.sort_count())
        throw input_error("structure needs one domain size per sort");
    for (int n : sizes_)
        if (n < 0 || n > max_sort_size)
            throw input_error("sort size out of range 0.." + std::to_string(max_sort_size));
    rels_.resize(static_cast<size_t>(sig_.relation_count()));
    hyper_.assign(static_cast<size_t>(sig_.relation_count()), 0);
    funcs_.resize(static_cast<size_t>(sig_.function_count()));
    for (int f = 0; f < sig_.function_count(); ++f) {
        std::size_t cells = 1;
        for (int s : sig_.functions()[static_cast<size_t>(f)].arg_sorts)
            cells *= static_cast<size_t>(sizes_[static_cast<size_t>(s)]);
        funcs_[static_cast<size_t>(f)].assign(cells, undet);
    }
}

int Structure::total_size() const {
    return std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

std::uint64_t Structure::pack(const std::vector<int>& tuple) {
    std::uint64_t key = 0;
    for (int v : tuple) key = (key << 8) | static_cast<std::uint64_t>(v & 0xff);
    return key;
}

std::vector<int> Structure::unpack(std::uint64_t key, int arity) {
    std::vector<int> tuple(static_cast<size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        tuple[static_cast<size_t>(i)] = static_cast<int>(key & 0xff);
        key >>= 8;
    }
    return tuple;
}

void Structure::add_tuple(int rel, const std::vector<int>& tuple) {
    const auto& sym = sig_.relations()[static_cast<size_t>(rel)];
    if (static_cast<int>(tuple.size()) != sym.arity)
        throw input_error("tuple arity mismatch for " + sym.name);
    for (int i = 0; i < sym.arity; ++i) {
        int id = tuple[static_cast<size_t>(i)];
        int limit = sizes_[static_cast<size_t>(sym.sorts[static_cast<size_t>(i)])];
        if (id < 0 || id >= limit)
            throw input_error("element id out of range in tuple for " + sym.name);
    }
    auto& set = rels_[static_cast<size_t>(rel)];
    std::uint64_t key = pack(tuple);
    auto it = std::lower_bound(set.begin(), set.end(), key);
    if (it == set.end() || *it != key) set.insert(it, key);
}

bool Structure::remove_tuple(int rel, const std::vector<int>& tuple) {
    auto& set = rels_[static_cast<size_t>(rel)];
    std::uint64_t key = pack(tuple);
    auto it = std::lower_bound(set.begin(), set.end(), key);
    if (it == set.end() || *it != key) return false;
    set.erase(it);
    return true;
}

bool Structure::holds(int rel, const std::vector<int>& tuple) const {
    const auto& set = rels_[static_cast<size_t>(rel)];
    return std::binary_search(set.begin(), set.end(), pack(tuple));
}

std::vector<std::vector<int>> Structure::tuples(int rel) const {
    const auto& sym = sig_.relations()[static_cast<size_t>(rel)];
    std::vector<std::vector<int>> out;
    out.reserve(rels_[static_cast<size_t>(rel)].size());
    for (std::uint64_t key : rels_[static_cast<size_t>(rel)])
        out.push_back(unpack(key, sym.arity));
    return out;
}

std::size_t Structure::table_index(int fn, const std::vector<int>& args) const {
    const auto& sym = sig_.functions()[static_cast<size_t>(fn)];
    if (static_cast<int>(args.size()) != sym.arity)
        throw input_error("argument arity mismatch for " + sym.name);
    std::size_t idx = 0;
    for (int i = 0; i < sym.arity; ++i) {
        int id = args[static_cast<size_t>(i)];
        int limit = sizes_[static_cast<size_t>(sym.arg_sorts[static_cast<size_t>(i)])];
        if (id < 0 || id >= limit)
            throw input_error("argument id out of range for " + sym.name);
        idx = idx * static_cast<size_t>(limit) + static_cast<size_t>(id);
    }
    return idx;
}

void Structure::set_function(int fn, const std::vector<int>& args, int value) {
    const auto& sym = sig_.functions()[static_cast<size_t>(fn)];
    int limit = sizes_[static_cast<size_t>(sym.result_sort)];
    if (value != undet && (value < 0 || value >= limit))
        throw input_error("function value out of range for " + sym.name);
    funcs_[static_cast<size_t>(fn)][table_index(fn, args)] = value;
}

int Structure::function_value(int fn, const std::vector<int>& args) const {
    return funcs_[static_cast<size_t>(fn)][table_index(fn, args)];
}

void Structure::set_function_table(int fn, std::vector<int> table) {
    auto& slot = funcs_[static_cast<size_t>(fn)];
    if (table.size() != slot.size())
        throw input_error("function table size mismatch for " +
                          sig_.functions()[static_cast<size_t>(fn)].name);
    const auto& sym = sig_.functions()[static_cast<size_t>(fn)];
    int limit = sizes_[static_cast<size_t>(sym.result_sort)];
    for (int v : table)
        if (v != undet && (v < 0 || v >= limit))
            throw input_error("function value out of range for " + sym.name);
    slot = std::move(table);
}

void Structure::set_hyperedge_flag(int rel, bool on) {
    hyper_[static_cast<size_t>(rel)] = on ? 1 : 0;
}

void Structure::validate() const {
    for (int r = 0; r < sig_.relation_count(); ++r) {
        if (!hyperedge_flag(r)) continue;
        const auto& sym = sig_.relations()[static_cast<size_t>(r)];
        for (const auto& t : tuples(r)) {
            // Uniformity: hyperedges list pairwise distinct vertices.
            for (size_t i = 0; i < t.size(); ++i)
                for (size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] == t[j])
                        throw input_error("hyperedge relation " + sym.name +
                                          " holds a tuple with repeated entries");
            // Symmetry: closed under coordinate permutations.
            std::vector<int> p = t;
            std::sort(p.begin(), p.end());
            do {
                if (!holds(r, p))
                    throw input_error("hyperedge relation " + sym.name +
                                      " is not closed under permutations");
            } while (std::next_permutation(p.begin(), p.end()));
        }
    }
}

bool Structure::operator==(const Structure& other) const {
    return sig_ == other.sig_ && sizes_ == other.sizes_ && rels_ == other.rels_ &&
           funcs_ == other.funcs_;
}

bool structure_less(const Structure& a, const Structure& b) {
    if (a.total_size() != b.total_size()) return a.total_size() < b.total_size();
    if (a.sort_sizes() != b.sort_sizes()) return a.sort_sizes() < b.sort_sizes();
    for (int r = 0; r < a.signature().relation_count(); ++r) {
        if (a.tuple_keys(r) != b.tuple_keys(r)) return a.tuple_keys(r) < b.tuple_keys(r);
    }
    for (int f = 0; f < a.signature().function_count(); ++f) {
        if (a.function_table(f) != b.function_table(f))
            return a.function_table(f) < b.function_table(f);
    }
    return false;
}

} // namespace fmlab
