/// Runs the validation battery and prints one verdict line per criterion.
/// Optional arguments restrict the run to the given criterion ids.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "fmlab/acceptance.hpp"

int main(int argc, char** argv) {
    fmlab::BatteryOptions opts;
    unsigned hw = std::thread::hardware_concurrency();
    opts.threads = hw == 0 ? 2 : static_cast<int>(std::min(hw, 8u));
#ifdef FMLAB_CLI_PATH
    opts.cli_path = FMLAB_CLI_PATH;
#endif
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));

    std::vector<fmlab::CriterionResult> results = fmlab::run_battery(opts);
    bool all = !results.empty();
    for (const fmlab::CriterionResult& c : results) {
        std::printf("%s  criterion %2d  %s  [%s] (%.2fs)\n", c.passed ? "PASS" : "FAIL",
                    c.id, c.title.c_str(), c.detail.c_str(), c.seconds);
        all = all && c.passed;
    }
    std::printf("%s\n", all ? "all criteria passed" : "criteria failed");
    return all ? 0 : 1;
}
