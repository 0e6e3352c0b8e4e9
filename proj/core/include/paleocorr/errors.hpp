#pragma once

#include <stdexcept>
#include <string>

namespace paleocorr {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (bad drag, coupling, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable: parse failures, non-monotone times, zero variance,
/// insufficient overlap between series, out-of-range lookups.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: calibration far off the curve, degenerate
/// chronology, vanishing kernel weights.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace paleocorr
