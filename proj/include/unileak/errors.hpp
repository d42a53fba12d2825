#pragma once

#include <stdexcept>

namespace unileak {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape/size mismatch or empty input handed to a kernel.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Precondition on a numerical argument violated (e.g. non-Hermitian generator).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid model config, control parameters or run setup.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (field or trajectory CSV).
class InputError : public Error {
 public:
  using Error::Error;
};

// Run aborted because a monitored quantity diverged.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace unileak
