#pragma once

#include <stdexcept>
#include <string>

namespace decodex {

// Invalid combination of coding/model parameters (bad lifting size, unknown
// backend, infeasible segmentation, malformed table).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Caller handed in data that violates an operation's preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace decodex
