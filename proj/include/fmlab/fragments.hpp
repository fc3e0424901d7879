#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmlab/structure.hpp"

namespace fmlab {

/// Finite list of pairwise non-isomorphic structures over one signature,
/// standing in for a class up to a total-size bound (sum over sorts). Empty
/// structures are excluded. Membership is always "isomorphic to a member".
class ClassFragment {
public:
    ClassFragment(Signature sig, int bound);

    const Signature& signature() const { return sig_; }
    int bound() const { return bound_; }
    const std::vector<Structure>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    /// Index of the member isomorphic to m, or -1.
    int find_iso(const Structure& m) const;

    /// Adds m unless an isomorphic member exists; validates signature, bound,
    /// and non-emptiness. Returns true when m was new.
    bool add(const Structure& m);

    /// Reorders members by (total size, structural order); index map rebuilt.
    void sort_members();

private:
    Signature sig_;
    int bound_;
    std::vector<Structure> members_;
    std::vector<std::string> keys_;
    std::map<std::string, int> index_;
};

/// All isomorphism types of induced substructures of m with 1..bound elements.
/// Subsets not closed under m's functions are skipped (they induce nothing).
ClassFragment age(const Structure& m, int bound);

/// Smallest substructure-closed fragment containing f, within f's bound.
ClassFragment hereditary_closure(const ClassFragment& f);

enum class ClassProperty { hp, jep, ap, sap, fap };

ClassProperty class_property_from_string(const std::string& name);
std::string to_string(ClassProperty p);

struct PropertyFailure {
    std::vector<int> participants; // member indices: HP 1, JEP 2, AP/SAP/FAP 3 (A,B,C)
    std::vector<int> embeddings;   // AP/SAP/FAP: indices of the span (e, f)
    std::string detail;
};

struct PropertyReport {
    ClassProperty which = ClassProperty::hp;
    bool holds = true;
    int witness_bound = 0;
    std::uint64_t instances = 0; // spans/pairs examined
    std::uint64_t skipped = 0;   // spans whose witness cannot fit the bound
    std::vector<PropertyFailure> failures;
};

struct PropertyOptions {
    int witness_bound = 0;        // 0 = fragment bound
    bool jep_disjoint = true;     // joint embedding with disjoint images
    std::size_t max_failures = 64;
};

/// Checks HP/JEP/AP/SAP/FAP on the fragment, treating it as the universe:
/// witnesses are searched among members only. Amalgamation spans whose pushout
/// cannot fit the witness bound (|B|+|C|-|A| too large) are counted as skipped,
/// not failed; joint-embedding pairs are always in scope, so an undersized
/// bound shows up as honest failures. FAP needs a purely relational signature.
PropertyReport check_property(const ClassFragment& f, ClassProperty which,
                              const PropertyOptions& opt = {});

// Fixture builders shared by generators and tests.
Structure chain_structure(int n);                  // strict linear order over "<"
Structure cycle_structure(int n);                  // n-cycle graph over "E"
Structure complete_graph(int n);                   // K_n over "E"
Structure path_graph(int n);                       // P_n over "E"
Structure graph_structure(int n, const std::vector<std::pair<int, int>>& edges);
Structure set_structure(int n);                    // pure equality, no symbols

/// One representative per isomorphism type of simple graphs on n vertices,
/// built by vertex extension with canonical-key deduplication.
std::vector<Structure> all_graphs(int n);

/// kind: "linear_orders" | "graphs" | "sets"; members of every size 1..max.
ClassFragment generate_fragment(const std::string& kind, int max_size);

/// Manifest: {"members": ["a.json", ...]} (paths relative to the manifest) or
/// {"generator": "graphs", "max_size": 4}.
ClassFragment fragment_from_json(const nlohmann::ordered_json& j,
                                 const std::string& base_dir);
ClassFragment fragment_from_file(const std::string& path);

} // namespace fmlab
