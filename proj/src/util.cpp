#include "fmlab/util.hpp"

#include <atomic>
#include <thread>

namespace fmlab {

bool for_each_tuple(const std::vector<int>& ranges,
                    const std::function<bool(const std::vector<int>&)>& fn) {
    for (int r : ranges)
        if (r <= 0) return true; // empty domain: no tuples
    std::vector<int> tuple(ranges.size(), 0);
    while (true) {
        if (!fn(tuple)) return false;
        if (!next_tuple(tuple, ranges)) return true;
    }
}

bool next_tuple(std::vector<int>& tuple, const std::vector<int>& ranges) {
    for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
        if (++tuple[i] < ranges[i]) return true;
        tuple[i] = 0;
    }
    return false;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    int count = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

} // namespace fmlab
