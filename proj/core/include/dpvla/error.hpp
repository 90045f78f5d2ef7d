#pragma once

#include <stdexcept>
#include <string>

namespace dpvla {

// Exit-code contract: 0 success, 1 usage/config, 2 provenance, 3 numeric,
// 4 acceptance-gate failure.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 1; }
};

struct ConfigError : Error {
  using Error::Error;
  int exit_code() const override { return 1; }
};

struct DimensionError : Error {
  using Error::Error;
};

struct VocabError : Error {
  using Error::Error;
};

struct StateError : Error {
  using Error::Error;
};

struct CatalogError : Error {
  using Error::Error;
};

struct SequencingError : Error {
  using Error::Error;
};

struct ProvenanceError : Error {
  using Error::Error;
  int exit_code() const override { return 2; }
};

struct NumericError : Error {
  using Error::Error;
  int exit_code() const override { return 3; }
};

struct DeterminismError : NumericError {
  using NumericError::NumericError;
};

struct GateError : Error {
  using Error::Error;
  int exit_code() const override { return 4; }
};

}  // namespace dpvla
