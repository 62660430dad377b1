#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxrep/partition.hpp"

namespace maxrep {

/// Boundary of a rotated Young diagram: f has slopes +-1 on unit intervals,
/// f(x) = |x| outside [-offset, offset], f(-offset) = offset.
/// steps[k] in {-1,+1} is the slope on [k - offset, k - offset + 1].
struct StepFunction {
  std::int64_t offset = 0;
  std::vector<std::int8_t> steps;

  StepFunction() = default;
  StepFunction(std::int64_t off, std::vector<std::int8_t> s);

  /// f at an integer point (any x, window or not).
  std::int64_t value_at(std::int64_t x) const;

  /// f at integer points -offset..offset (size 2*offset+1).
  std::vector<std::int64_t> heights() const;

  /// Steps sum to zero and are all +-1 (then f is a partition boundary).
  bool is_valid() const;

  /// Shrink the window to the minimal symmetric one containing all deviation
  /// from |x|.
  void normalize();

  /// "<offset>:<+->*", e.g. "2:++--".
  std::string to_string() const;
  static StepFunction parse(const std::string& text);

  bool operator==(const StepFunction&) const = default;
};

/// Russian-convention boundary of lambda; window offset = max(rows, first).
StepFunction to_step_function(const Partition& lambda);

/// Inverse of to_step_function (zero-length virtual rows dropped).
/// Throws std::invalid_argument if f is not valid.
Partition from_step_function(const StepFunction& f);

/// Hook multiset {j - i : step at i is up, step at j is down, i < j},
/// positions in [-offset, offset).  Size equals area(f).
std::vector<std::int64_t> hooks_from_steps(const StepFunction& f);

/// N(f) = (1/2) Int (f - |x|) dx, exact.
std::int64_t area(const StepFunction& f);

}  // namespace maxrep
