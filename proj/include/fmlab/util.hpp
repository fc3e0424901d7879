#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fmlab {

/// Sentinel for an undetermined function value; serialized as -1.
inline constexpr int undet = -1;

/// Runs fn on every tuple over the given per-coordinate ranges, in
/// lexicographic order. fn receives the tuple; returning false stops early.
/// An empty range list yields the single empty tuple.
bool for_each_tuple(const std::vector<int>& ranges,
                    const std::function<bool(const std::vector<int>&)>& fn);

/// Odometer step over mixed ranges; returns false on wrap-around to all zeros.
bool next_tuple(std::vector<int>& tuple, const std::vector<int>& ranges);

/// FNV-1a, used for config hashes in reports.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Chunked deterministic parallel map: calls fn(i) for i in [0, n) using up to
/// `threads` workers; results must be written to pre-sized slots by index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

} // namespace fmlab
