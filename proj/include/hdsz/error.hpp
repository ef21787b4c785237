#pragma once

#include <stdexcept>
#include <string>

namespace hdsz {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed, truncated or out-of-contract input data (files, samples, rates).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRateError : public DataError {
 public:
  using DataError::DataError;
};

// Two vectors (or a model and a recording) disagree on shape.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Raised when a model cannot be fitted, e.g. no vote threshold detects the
// training seizure.
class TrainingFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace hdsz
