#pragma once

#include <string>

#include <json.hpp>

#include "fmlab/structure.hpp"

namespace fmlab {

using ordered_json = nlohmann::ordered_json;

/// JSON round-trip for structures. The format:
///   {"name": ..., "sorts": {"main": 4, ...},
///    "signature": {"relations": [{"name":"E","arity":2,"sorts":["main","main"]}],
///                  "functions": [{"name":"f","arity":1,"sorts":["main"],"result":"main"}]},
///    "relations": {"E": [[0,1], ...]},
///    "functions": {"f": {"table": [0, -1, 2, ...]}},
///    "hyperedges": ["R"]}
/// Single-sorted files may drop "sorts" and give "size" instead; per-symbol
/// "sorts"/"result" then default to "main". -1 in a table is the undetermined
/// sentinel. Tuple lists are emitted sorted.
ordered_json structure_to_json(const Structure& m);
Structure structure_from_json(const ordered_json& j);

Structure load_structure(const std::string& path);
void save_structure(const Structure& m, const std::string& path);

/// Reads a whole file; throws input_error when missing.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace fmlab
