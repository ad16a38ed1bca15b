#pragma once

#include <stdexcept>
#include <string>

namespace cpl {

// Thrown when an argument violates an operation's precondition.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an exact computation would exceed a configured support or
// enumeration cap. The caller should fall back to a search / bound mode.
class resource_limit : public std::runtime_error {
 public:
  explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpl
