#pragma once

#include <stdexcept>
#include <string>

namespace becstate {

/// Invalid configuration or input parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solve or eigen-decomposition failed to produce a valid result.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many positive-P trajectories left the stable region of phase space.
class EscapeThresholdError : public std::runtime_error {
 public:
  EscapeThresholdError(const std::string& what, std::size_t escaped, std::size_t total)
      : std::runtime_error(what), escaped_(escaped), total_(total) {}
  std::size_t escaped() const { return escaped_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t escaped_;
  std::size_t total_;
};

}  // namespace becstate
