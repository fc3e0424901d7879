#pragma once

#include <algorithm>
#include <cstdio>
#include <string>

#include <sys/wait.h>

#include "fmlab/structure.hpp"
#include "fmlab/twinwidth.hpp"

namespace testutil {

/// Reference twin-width: exhaustive minimax over every contraction order.
/// `best` prunes branches that cannot improve; exponential, so keep inputs at
/// six vertices or fewer.
inline int brute_width_from(const fmlab::Trigraph& t, int best) {
    if (t.live_count() <= 1) return 0;
    std::vector<int> verts = t.vertices();
    for (size_t a = 0; a < verts.size(); ++a) {
        for (size_t b = a + 1; b < verts.size(); ++b) {
            fmlab::Trigraph c = fmlab::contract(t, verts[a], verts[b]);
            int now = c.max_red_degree();
            if (now >= best) continue;
            int rest = brute_width_from(c, best);
            best = std::min(best, std::max(now, rest));
            if (best == 0) return 0;
        }
    }
    return best;
}

inline int brute_width(const fmlab::Structure& g) {
    fmlab::Trigraph t = fmlab::Trigraph::from_graph(g);
    return brute_width_from(t, std::max(1, t.live_count()));
}

/// Runs a shell command, captures stdout; code is -1 when the child did not
/// exit normally.
struct RunCapture {
    int code = -1;
    std::string out;
};

inline RunCapture run_command(const std::string& command) {
    RunCapture r;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

} // namespace testutil
