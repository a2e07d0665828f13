#pragma once

#include <stdexcept>
#include <string>

namespace alambda {

// Caller violated an operation's contract (mixed semirings, wrong node
// shapes, non-positive semiring where positivity is required, ...).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rejected input text. Positions are 1-based.
struct ParseError : std::runtime_error {
    int line;
    int column;

    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                             std::to_string(column_)),
          line(line_), column(column_) {}
};

} // namespace alambda
