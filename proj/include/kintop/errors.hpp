#pragma once

#include <stdexcept>
#include <string>

namespace kintop {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed files, contract violations, ill-posed models.
struct ValidationError : Error {
  using Error::Error;
};

// The math gave up: singular spectral matrix, factorization that does not
// converge, diverging simulation.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace kintop
