#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace noisy {

/// Index of a record in a dataset, in [0, n). Algorithms only ever see these.
using ItemId = std::uint32_t;

/// Which end of the order a selection routine is after.
enum class Direction { Max, Min };

/// Raised for malformed inputs and violated preconditions. The CLI maps it to
/// exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, std::string_view what) {
  if (!cond) throw ValidationError(std::string(what));
}

}  // namespace noisy
