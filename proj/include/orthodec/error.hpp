#pragma once

#include <stdexcept>
#include <string>

namespace orthodec {

/// Raised when an operation rejects its input (dimension mismatch, bad range,
/// non-measurable element, malformed file...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a requested moment does not exist for an innovation law.
class NotIntegrableError : public InputError {
 public:
  explicit NotIntegrableError(const std::string& what) : InputError(what) {}
};

}  // namespace orthodec
