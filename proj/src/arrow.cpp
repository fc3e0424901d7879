#include "fmlab/arrow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "fmlab/errors.hpp"
#include "fmlab/morphisms.hpp"

namespace fmlab {

std::string to_string(ArrowVerdict v) {
    switch (v) {
        case ArrowVerdict::holds: return "holds";
        case ArrowVerdict::fails: return "fails";
        case ArrowVerdict::unknown: return "unknown";
    }
    return "?";
}

namespace {

struct ArrowSetup {
    std::size_t copies = 0;              // #emb(A, C)
    int per_copy = 0;                    // #emb(A, B)
    std::vector<std::vector<int>> in_b;  // per B-embedding: A-copy indices inside it
    std::vector<std::vector<int>> inv;   // per A-copy: B-embeddings containing it
};

ArrowSetup build_setup(const Structure& c, const Structure& b, const Structure& a) {
    auto emb_ab = enumerate_embeddings(a, b);
    if (emb_ab.empty()) throw input_error("A does not embed in B");
    auto emb_bc = enumerate_embeddings(b, c);
    if (emb_bc.empty()) throw input_error("B does not embed in C");
    auto emb_ac = enumerate_embeddings(a, c);

    std::map<std::vector<std::vector<int>>, int> index;
    for (size_t i = 0; i < emb_ac.size(); ++i)
        index[emb_ac[i].map] = static_cast<int>(i);

    int sorts = a.signature().sort_count();
    ArrowSetup setup;
    setup.copies = emb_ac.size();
    setup.per_copy = static_cast<int>(emb_ab.size());
    setup.inv.resize(emb_ac.size());
    for (const auto& beta : emb_bc) {
        std::vector<int> inside;
        for (const auto& alpha : emb_ab) {
            Embedding comp;
            comp.map.resize(static_cast<size_t>(sorts));
            for (int s = 0; s < sorts; ++s) {
                comp.map[static_cast<size_t>(s)].resize(
                    static_cast<size_t>(a.sort_size(s)));
                for (int x = 0; x < a.sort_size(s); ++x)
                    comp.map[static_cast<size_t>(s)][static_cast<size_t>(x)] =
                        beta.apply(s, alpha.apply(s, x));
            }
            inside.push_back(index.at(comp.map));
        }
        std::sort(inside.begin(), inside.end());
        int bi = static_cast<int>(setup.in_b.size());
        for (int copy : inside) setup.inv[static_cast<size_t>(copy)].push_back(bi);
        setup.in_b.push_back(std::move(inside));
    }
    return setup;
}

ArrowResult arrow_exhaustive(const ArrowSetup& setup, int k, std::uint64_t budget) {
    ArrowResult result;
    std::size_t n = setup.copies;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / static_cast<std::uint64_t>(k))
            throw budget_error("colouring space " + std::to_string(k) + "^" +
                               std::to_string(n) + " exceeds the budget " +
                               std::to_string(budget));
        total *= static_cast<std::uint64_t>(k);
    }

    std::vector<std::vector<int>> cnt(setup.in_b.size(),
                                      std::vector<int>(static_cast<size_t>(k), 0));
    std::vector<char> mono(setup.in_b.size(), 1);
    for (auto& cc : cnt) cc[0] = setup.per_copy;
    std::size_t num_mono = setup.in_b.size();

    std::vector<int> colour(n, 0);
    auto visit = [&]() {
        ++result.checked;
        if (num_mono == 0) {
            result.verdict = ArrowVerdict::fails;
            result.witness_colouring = colour;
            return false;
        }
        return true;
    };
    if (!visit()) return result;
    if (k == 1 || n == 0) {
        result.verdict = ArrowVerdict::holds;
        result.note = "exhausted";
        return result;
    }

    // Loopless reflected k-ary Gray enumeration: one digit moves by 1 per step.
    std::vector<int> focus(n + 1);
    std::iota(focus.begin(), focus.end(), 0);
    std::vector<int> dir(n, 1);
    while (true) {
        std::size_t j = static_cast<std::size_t>(focus[0]);
        focus[0] = 0;
        if (j == n) break;
        int old = colour[j];
        colour[j] += dir[j];
        int now = colour[j];
        if (now == 0 || now == k - 1) {
            dir[j] = -dir[j];
            focus[j] = focus[j + 1];
            focus[j + 1] = static_cast<int>(j) + 1;
        }
        for (int bi : setup.inv[j]) {
            auto& cc = cnt[static_cast<size_t>(bi)];
            --cc[static_cast<size_t>(old)];
            ++cc[static_cast<size_t>(now)];
            bool is_mono = cc[static_cast<size_t>(now)] == setup.per_copy;
            if (is_mono != (mono[static_cast<size_t>(bi)] != 0)) {
                mono[static_cast<size_t>(bi)] = is_mono ? 1 : 0;
                num_mono += is_mono ? 1 : static_cast<std::size_t>(-1);
            }
        }
        if (!visit()) return result;
    }
    result.verdict = ArrowVerdict::holds;
    result.note = "exhausted";
    return result;
}

ArrowResult arrow_search(const ArrowSetup& setup, int k, std::uint64_t budget) {
    ArrowResult result;
    std::size_t n = setup.copies;
    std::vector<std::vector<int>> cnt(setup.in_b.size(),
                                      std::vector<int>(static_cast<size_t>(k), 0));
    std::vector<int> assigned(setup.in_b.size(), 0);
    std::vector<int> colour(n, -1);
    std::size_t complete_mono = 0;
    bool found = false, out_of_budget = false;

    auto apply = [&](std::size_t copy, int cc, int delta) {
        for (int bi : setup.inv[copy]) {
            auto& counts = cnt[static_cast<size_t>(bi)];
            int& done = assigned[static_cast<size_t>(bi)];
            if (delta > 0) {
                ++counts[static_cast<size_t>(cc)];
                ++done;
                if (done == setup.per_copy &&
                    counts[static_cast<size_t>(cc)] == setup.per_copy)
                    ++complete_mono;
            } else {
                if (done == setup.per_copy &&
                    counts[static_cast<size_t>(cc)] == setup.per_copy)
                    --complete_mono;
                --counts[static_cast<size_t>(cc)];
                --done;
            }
        }
    };

    std::function<bool(std::size_t)> rec = [&](std::size_t t) {
        if (t == n) {
            found = true;
            result.witness_colouring = colour;
            return true;
        }
        int limit = t == 0 ? 1 : k; // first copy's colour fixed by symmetry
        for (int cc = 0; cc < limit; ++cc) {
            if (++result.checked > budget) {
                out_of_budget = true;
                return true;
            }
            colour[t] = cc;
            apply(t, cc, +1);
            if (complete_mono == 0 && rec(t + 1)) return true;
            apply(t, cc, -1);
            colour[t] = -1;
        }
        return false;
    };

    if (n == 0 || k == 1) {
        // the unique colouring is monochromatic everywhere
        result.verdict = ArrowVerdict::holds;
        result.note = "exhausted";
        return result;
    }
    rec(0);
    if (found) {
        result.verdict = ArrowVerdict::fails;
    } else if (out_of_budget) {
        result.verdict = ArrowVerdict::unknown;
        result.note = "search budget exhausted";
    } else {
        result.verdict = ArrowVerdict::holds;
        result.note = "exhausted";
    }
    return result;
}

} // namespace

ArrowResult arrow(const Structure& c, const Structure& b, const Structure& a,
                  int k, ArrowMode mode, std::uint64_t budget) {
    if (k < 1) throw input_error("colour count must be at least 1");
    ArrowSetup setup = build_setup(c, b, a);
    return mode == ArrowMode::exhaustive ? arrow_exhaustive(setup, k, budget)
                                         : arrow_search(setup, k, budget);
}

bool colouring_has_monochromatic_copy(const Structure& c, const Structure& b,
                                      const Structure& a,
                                      const std::vector<int>& colouring) {
    ArrowSetup setup = build_setup(c, b, a);
    if (colouring.size() != setup.copies)
        throw input_error("colouring covers " + std::to_string(colouring.size()) +
                          " copies, expected " + std::to_string(setup.copies));
    for (const auto& inside : setup.in_b) {
        bool mono = true;
        for (size_t i = 1; i < inside.size(); ++i)
            if (colouring[static_cast<size_t>(inside[i])] !=
                colouring[static_cast<size_t>(inside[0])])
                mono = false;
        if (mono) return true;
    }
    return false;
}

RamseyScanResult ramsey_scan(const ClassFragment& f, const Structure& a,
                             const Structure& b, int k, ArrowMode mode,
                             std::uint64_t budget) {
    if (k < 2) throw input_error("ramsey scan needs at least 2 colours");
    if (enumerate_embeddings(a, b).empty())
        throw input_error("A does not embed in B");
    std::vector<int> order(f.members().size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const Structure& mx = f.members()[static_cast<size_t>(x)];
        const Structure& my = f.members()[static_cast<size_t>(y)];
        if (mx.total_size() != my.total_size())
            return mx.total_size() < my.total_size();
        return structure_less(mx, my);
    });
    RamseyScanResult result;
    for (int idx : order) {
        const Structure& c = f.members()[static_cast<size_t>(idx)];
        if (enumerate_embeddings(b, c).empty()) {
            result.verdicts.emplace_back(idx, ArrowVerdict::fails);
            continue;
        }
        ArrowResult r = arrow(c, b, a, k, mode, budget);
        result.verdicts.emplace_back(idx, r.verdict);
        if (r.verdict == ArrowVerdict::holds) {
            result.witness = idx;
            break;
        }
    }
    return result;
}

} // namespace fmlab
