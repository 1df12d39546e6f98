#pragma once

#include <stdexcept>
#include <string>

namespace dcm {

/// Input could not be read (missing file, unreadable stream).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Input was read but violates a data or argument contract.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcm
