#pragma once

#include <stdexcept>
#include <string>

namespace fmlab {

/// Base class for all workbench errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed signatures, structures, or inputs that violate their declared shape.
struct input_error : error {
    explicit input_error(const std::string& what) : error(what) {}
};

/// Formula text that does not parse; carries a 1-based source position.
struct parse_error : error {
    parse_error(const std::string& what, int line_, int column_)
        : error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
    int line;
    int column;
};

/// An exhaustive search ran out of its node or size budget before reaching a verdict.
struct budget_error : error {
    explicit budget_error(const std::string& what) : error(what) {}
};

} // namespace fmlab
