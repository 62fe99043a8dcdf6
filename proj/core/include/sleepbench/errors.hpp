#pragma once

#include <stdexcept>

namespace sleepbench {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Array rank or extent mismatch.
struct ShapeError : Error {
  using Error::Error;
};

// Invalid argument or configuration value.
struct ParamError : Error {
  using Error::Error;
};

// Malformed cell, token, or config-file line.
struct ParseError : Error {
  using Error::Error;
};

// CSV header does not match the registered dataset schema.
struct SchemaError : Error {
  using Error::Error;
};

// Unusable data: empty file, single-class labels, degenerate split.
struct DataError : Error {
  using Error::Error;
};

// Non-finite loss encountered during gradient training.
struct DivergenceError : Error {
  using Error::Error;
};

// API misuse, e.g. predicting with a model left in training mode.
struct ContractError : Error {
  using Error::Error;
};

// Report emission failure (missing benchmark cell).
struct ReportError : Error {
  using Error::Error;
};

}  // namespace sleepbench
