#pragma once

#include <stdexcept>
#include <string>

namespace uplift {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid arguments, out-of-domain values, missing files.
struct InputError : Error {
  using Error::Error;
};

// CSV ingestion problems; messages name the offending row and column.
struct IngestError : InputError {
  using InputError::InputError;
};

// Degenerate model fits (single-class data, empty groups, refused plans).
struct FitError : Error {
  using Error::Error;
};

}  // namespace uplift
