#pragma once

#include <stdexcept>
#include <string>

namespace qdyn {

// Bad user input: non-square-free D, malformed rationals, bad grid specs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical invariant failed at runtime (Markov property, tiling,
// search-box completeness, ...). These indicate a wrong construction, never
// bad input.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qdyn
