#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmlab/formula.hpp"
#include "fmlab/structure.hpp"

namespace fmlab {

/// Formula compiled against one structure: variables become slots, relation
/// names become indices. Reusable across many assignments; not thread-shared.
class Evaluator {
public:
    Evaluator(const Structure& m, const Formula& f);

    /// Free-variable assignment in first-occurrence order.
    bool eval(const std::vector<int>& free_assignment) const;
    const std::vector<std::pair<std::string, int>>& free_vars() const { return free_; }

private:
    struct Node {
        FormulaKind kind;
        int rel = -1;
        std::vector<int> arg_slots;
        int slot = -1;
        int sort = -1;
        int left = -1;
        int right = -1;
    };

    int compile(const Formula& f, std::map<std::string, int>& slots);
    bool eval_node(int idx, std::vector<int>& env) const;

    const Structure* m_;
    std::vector<Node> nodes_;
    int root_ = -1;
    int slot_count_ = 0;
    std::vector<std::pair<std::string, int>> free_;
    std::vector<int> free_slots_;
};

/// One-shot evaluation; sentences need no assignment.
bool evaluate(const Structure& m, const Formula& f,
              const std::map<std::string, int>& assignment = {});

/// For a universally quantified sentence, searches the outermost forall prefix
/// for a falsifying assignment; nullopt when the sentence holds.
std::optional<std::map<std::string, int>> find_counterexample(const Structure& m,
                                                              const Formula& f);

/// Canonical quantifier-free type of a tuple of (sort, element) pairs: the
/// equality partition of coordinates plus every (relation, coordinate-tuple,
/// polarity) fact, rendered to a byte string. When the signature has function
/// symbols the tuple is closed under them first and the facts of the generated
/// substructure (function graphs included, undetermined marked) are appended,
/// so tuples in structures with projections compare by their full reach.
std::string qf_type(const Structure& m, const std::vector<std::pair<int, int>>& tuple);

/// Single-sorted convenience overload; all entries live in `sort`.
std::string qf_type(const Structure& m, const std::vector<int>& tuple, int sort = 0);

/// Extends m with a relation named `name` holding exactly the satisfying
/// assignments of f (coordinates ordered by free-variable occurrence).
Structure add_defined_relation(const Structure& m, const std::string& name,
                               const Formula& f);

/// Reduct description: keep named symbols and/or add defined relations.
struct ReductSpec {
    std::vector<std::string> keep;
    std::vector<NamedFormula> define;
};

ReductSpec reduct_from_json(const nlohmann::ordered_json& j);
ReductSpec reduct_from_file(const std::string& path);

/// Same domain, new signature: kept relations/functions copied, defined
/// relations evaluated. An empty spec keeps nothing (pure equality reduct).
Structure apply_reduct(const Structure& m, const ReductSpec& spec);

} // namespace fmlab
