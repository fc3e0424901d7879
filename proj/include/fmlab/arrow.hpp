#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmlab/fragments.hpp"
#include "fmlab/structure.hpp"

namespace fmlab {

enum class ArrowMode { exhaustive, search };
enum class ArrowVerdict { holds, fails, unknown };

std::string to_string(ArrowVerdict v);

struct ArrowResult {
    ArrowVerdict verdict = ArrowVerdict::unknown;
    /// Colour per embedding of A into C (enumeration order) when fails.
    std::vector<int> witness_colouring;
    std::uint64_t checked = 0; // colourings visited / search nodes
    std::string note;
};

/// Decides C -> (B)^A_k: every k-colouring of the embeddings of A into C is
/// monochromatic on the A-copies inside some copy of B. Exhaustive mode walks
/// all k^#emb(A,C) colourings in Gray order (budget_error when that exceeds
/// the budget); search mode backtracks for a counterexample colouring, and its
/// budget caps search nodes ("unknown" when exhausted).
ArrowResult arrow(const Structure& c, const Structure& b, const Structure& a,
                  int k, ArrowMode mode = ArrowMode::exhaustive,
                  std::uint64_t budget = 1ull << 20);

/// Replays a colouring against the copies of B in C; true when some copy is
/// monochromatic (i.e. the colouring is NOT a counterexample).
bool colouring_has_monochromatic_copy(const Structure& c, const Structure& b,
                                      const Structure& a,
                                      const std::vector<int>& colouring);

struct RamseyScanResult {
    int witness = -1; // member index, -1 when the fragment is exhausted
    std::vector<std::pair<int, ArrowVerdict>> verdicts;
};

/// Scans fragment members in size order for the first C with C -> (B)^A_k.
/// Requires k >= 2 (k = 1 would make every member a witness).
RamseyScanResult ramsey_scan(const ClassFragment& f, const Structure& a,
                             const Structure& b, int k,
                             ArrowMode mode = ArrowMode::exhaustive,
                             std::uint64_t budget = 1ull << 20);

} // namespace fmlab
