#pragma once

#include <stdexcept>
#include <string>

namespace gefrfe {

/// Bad user input: malformed configuration, unknown filter names, invalid ranges.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent dataset files. Messages carry file and line where known.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigensolver failures and violated numerical invariants.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gefrfe
