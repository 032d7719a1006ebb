#pragma once

#include <stdexcept>
#include <string>

namespace optiprecond {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad files, bad flags, matrices that fail a precondition.
struct InputError : Error {
    using Error::Error;
};

struct ParseError : InputError {
    ParseError(const std::string& what, long line_no)
        : InputError(what + " (line " + std::to_string(line_no) + ")"), detail(what), line(line_no) {}
    std::string detail;
    long line;
};

// A solver could not finish: lost feasibility, stalled, singular system.
struct SolverError : Error {
    using Error::Error;
};

struct NotPositiveDefinite : SolverError {
    using SolverError::SolverError;
};

}  // namespace optiprecond
