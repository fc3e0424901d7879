#pragma once

#include <string>
#include <vector>

namespace fmlab {

struct RelationSymbol {
    std::string name;
    int arity = 0;
    std::vector<int> sorts; // one sort index per coordinate
};

struct FunctionSymbol {
    std::string name;
    int arity = 0;
    std::vector<int> arg_sorts;
    int result_sort = 0;
};

/// A finite multi-sorted relational signature with optional total function symbols.
/// Immutable after construction; symbol and sort names are unique.
class Signature {
public:
    Signature();
    explicit Signature(std::vector<std::string> sorts,
                       std::vector<RelationSymbol> relations = {},
                       std::vector<FunctionSymbol> functions = {});

    const std::vector<std::string>& sorts() const { return sorts_; }
    const std::vector<RelationSymbol>& relations() const { return relations_; }
    const std::vector<FunctionSymbol>& functions() const { return functions_; }

    int sort_count() const { return static_cast<int>(sorts_.size()); }
    int relation_count() const { return static_cast<int>(relations_.size()); }
    int function_count() const { return static_cast<int>(functions_.size()); }

    /// Index lookups; the _opt forms return -1 when the name is unknown.
    int sort_index(const std::string& name) const;
    int relation_index(const std::string& name) const;
    int function_index(const std::string& name) const;
    int sort_index_opt(const std::string& name) const;
    int relation_index_opt(const std::string& name) const;
    int function_index_opt(const std::string& name) const;

    bool operator==(const Signature& other) const;
    bool operator!=(const Signature& other) const { return !(*this == other); }

    /// Convenience factory for one sort named "main" and relation symbols only.
    static Signature single_sorted(std::vector<RelationSymbol> relations);

private:
    void validate() const;

    std::vector<std::string> sorts_;
    std::vector<RelationSymbol> relations_;
    std::vector<FunctionSymbol> functions_;
};

/// Shorthand for a single-sorted relation symbol of the given arity.
RelationSymbol rel_symbol(const std::string& name, int arity, int sort = 0);

} // namespace fmlab
