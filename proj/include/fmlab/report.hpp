#pragma once

#include <string>
#include <vector>

#include "fmlab/structure_io.hpp"

namespace fmlab {

/// Machine-readable run report emitted by every CLI subcommand.  All fields
/// except `seconds` are deterministic functions of the invocation, so two runs
/// with the same arguments produce byte-identical JSON once `seconds` is
/// stripped.
struct Report {
    std::string command;                  ///< subcommand name
    std::vector<std::string> arguments;   ///< raw arguments after the subcommand
    std::string config_hash;              ///< hash of command + arguments
    ordered_json scale;                   ///< problem sizes, budgets, modes
    ordered_json verdicts;                ///< the computed answers
    ordered_json witnesses;               ///< certificates / counterexamples
    double seconds = 0.0;                 ///< wall-clock time (nondeterministic)

    ordered_json to_json() const;
    static Report from_json(const ordered_json& j);
};

/// Creates a report stamped with the invocation and its config hash.
Report make_report(const std::string& command, const std::vector<std::string>& arguments);

/// Removes the `seconds` field; the remainder is deterministic.
ordered_json strip_timing(ordered_json j);

} // namespace fmlab
