#pragma once

#include <stdexcept>
#include <string>

namespace hybridkc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// point descriptor out of range for the space
struct InvalidPointError : Error {
    using Error::Error;
};

// operation on a solution with no concrete centers
struct EmptySolutionError : Error {
    using Error::Error;
};

// ball-intersection invoked with no requests
struct EmptyRequestError : Error {
    using Error::Error;
};

// no alpha satisfies the ball-density predicate (guess far above any optimum)
struct GuessTooLargeError : Error {
    using Error::Error;
};

// oracle enumeration budget exceeded
struct TooLargeError : Error {
    using Error::Error;
};

// matrix metric failed symmetry / diagonal / triangle validation, or a
// malformed instance file
struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace hybridkc
