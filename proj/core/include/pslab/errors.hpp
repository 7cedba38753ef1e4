#pragma once

#include <stdexcept>
#include <string>

namespace pslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the lexers/parsers for programs, expressions, assertions,
// state literals and spec files.
struct ParseError : Error {
    ParseError(const std::string& message, int line, int col)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + message),
          line(line),
          col(col) {}
    int line;
    int col;
};

// Conditioning a sample family on an event of probability zero.
struct NullEventError : Error {
    using Error::Error;
};

// A random state was required to be V-total but some sample point is not.
struct NotTotalError : Error {
    using Error::Error;
};

} // namespace pslab
