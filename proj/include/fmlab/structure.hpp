#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmlab/signature.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

/// A finite structure: dense element ids 0..n-1 per sort, relation tuple sets
/// kept sorted for deterministic iteration, and total function tables where
/// the sentinel `undet` (-1) stands for an undetermined value.
///
/// Intended use is build-then-freeze: populate via add_tuple / set_function,
/// after which all operations treat the structure as immutable.
class Structure {
public:
    static constexpr int max_arity = 8;
    static constexpr int max_sort_size = 254;

    Structure() = default;
    Structure(Signature sig, std::vector<int> sort_sizes, std::string name = "");

    const Signature& signature() const { return sig_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    int sort_size(int sort) const { return sizes_[static_cast<size_t>(sort)]; }
    const std::vector<int>& sort_sizes() const { return sizes_; }
    int total_size() const;

    void add_tuple(int rel, const std::vector<int>& tuple);
    bool remove_tuple(int rel, const std::vector<int>& tuple);
    bool holds(int rel, const std::vector<int>& tuple) const;
    std::size_t tuple_count(int rel) const { return rels_[static_cast<size_t>(rel)].size(); }
    std::vector<std::vector<int>> tuples(int rel) const;
    const std::vector<std::uint64_t>& tuple_keys(int rel) const {
        return rels_[static_cast<size_t>(rel)];
    }

    void set_function(int fn, const std::vector<int>& args, int value);
    int function_value(int fn, const std::vector<int>& args) const;
    const std::vector<int>& function_table(int fn) const {
        return funcs_[static_cast<size_t>(fn)];
    }
    void set_function_table(int fn, std::vector<int> table);

    void set_hyperedge_flag(int rel, bool on);
    bool hyperedge_flag(int rel) const { return hyper_[static_cast<size_t>(rel)] != 0; }

    /// Checks id ranges, function table shapes, and Uniformity/Symmetry for
    /// relations flagged as hyperedge sets. Throws input_error on violation.
    void validate() const;

    bool operator==(const Structure& other) const;
    bool operator!=(const Structure& other) const { return !(*this == other); }

    /// Packs a tuple of element ids into the key used for set membership.
    static std::uint64_t pack(const std::vector<int>& tuple);
    static std::vector<int> unpack(std::uint64_t key, int arity);

private:
    std::size_t table_index(int fn, const std::vector<int>& args) const;

    Signature sig_;
    std::vector<int> sizes_;
    std::vector<std::vector<std::uint64_t>> rels_;
    std::vector<std::vector<int>> funcs_;
    std::vector<std::uint8_t> hyper_;
    std::string name_;
};

/// Total order on structures over equal signatures: by sizes, then relation
/// content, then function tables. Used for deterministic fragment listings.
bool structure_less(const Structure& a, const Structure& b);

} // namespace fmlab
