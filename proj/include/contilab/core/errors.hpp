#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contilab {

/// Incompatible or invalid experiment wiring (spaces, unknown keys, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite or out-of-tolerance value.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
  NumericError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step), has_step_(true) {}

  bool has_step() const { return has_step_; }
  std::size_t step() const { return step_; }

 private:
  std::size_t step_ = 0;
  bool has_step_ = false;
};

}  // namespace contilab
