#pragma once

#include <stdexcept>
#include <string>

namespace gmp {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: out-of-range depth, malformed selector, bad table file.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// h(t) == h(t0) on an interval where a strictly positive increment is
/// required. The law there is a Dirac mass, not a density.
class DegenerateIncrement : public Error {
  public:
    using Error::Error;
};

/// A matrix that had to be factorized or inverted was singular.
class SingularMatrix : public Error {
  public:
    using Error::Error;
};

} // namespace gmp
