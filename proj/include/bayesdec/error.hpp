#pragma once

#include <stdexcept>
#include <string>

namespace bayesdec {

// Bad inputs: malformed files, broken invariants, misused options.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem-level failures (missing file, unwritable directory).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Chains failed the mixing diagnostic; results are not trustworthy.
class NonconvergenceError : public std::runtime_error {
 public:
  explicit NonconvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bayesdec
