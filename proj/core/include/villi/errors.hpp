#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace villi {

// Contract violations (bad sizes, invalid flag combinations, missing inputs)
// are reported as std::invalid_argument throughout the library. The types
// below cover the conditions that need more context than a message string.

/// Thrown when a training loop produces a non-finite loss. The models as of
/// the last completed epoch are retained by the thrower and can be recovered
/// through the exception (see synthesis.hpp / segmentation.hpp).
class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(const std::string& what, int failed_epoch)
      : std::runtime_error(what), failed_epoch_(failed_epoch) {}

  /// 1-based: 1 means the first epoch never completed.
  int failed_epoch() const { return failed_epoch_; }

 private:
  int failed_epoch_;
};

}  // namespace villi
