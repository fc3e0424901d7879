#pragma once

#include <string>
#include <vector>

#include "fmlab/structure_io.hpp"

namespace fmlab {

/// Outcome of one check in the validation battery.
struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;    ///< measured numbers, or the reason for failure
    double seconds = 0.0;
};

/// Knobs for the validation battery; defaults match the shipped repository
/// layout when built through CMake.
struct BatteryOptions {
    std::string data_dir;    ///< directory holding the frozen baseline tables
    std::string cli_path;    ///< fmlab binary used for the determinism check
    int threads = 1;
    std::vector<int> only;   ///< run just these criterion ids (empty = all)
};

/// Runs the full validation battery and returns one result per criterion.
std::vector<CriterionResult> run_battery(const BatteryOptions& opts);

/// JSON rows for embedding battery results in a report.
ordered_json battery_to_json(const std::vector<CriterionResult>& results);

} // namespace fmlab
