#pragma once

#include <stdexcept>
#include <string>

namespace qrlab {

/// Invalid parameters or preconditions on inputs.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped: Nyquist, coverage, or tail budget. Never
/// recovered from silently.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration does not match the experiment schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrlab
