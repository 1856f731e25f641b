#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mfdf {

/// Invalid input: bad configuration, violated precondition, non-finite data.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the stepper when the solution stops being finite or exceeds the
/// configured amplitude cap.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, std::int64_t step, double max_abs, const std::string& what)
      : std::runtime_error(what), time_(time), step_(step), max_abs_(max_abs) {}

  double time() const noexcept { return time_; }
  std::int64_t step() const noexcept { return step_; }
  double max_abs() const noexcept { return max_abs_; }

 private:
  double time_;
  std::int64_t step_;
  double max_abs_;
};

/// File could not be opened, written, or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfdf
