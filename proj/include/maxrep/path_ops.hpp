#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "maxrep/local_energy.hpp"

namespace maxrep {

/// A path surgery could not satisfy its contract (parity, flip spacing,
/// drift window, ...).
class construction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maximal path below the line y = rho x for rho >= 0 (greedy: step up
/// whenever the result stays below the line), mirrored for rho < 0.
/// Guarantees f(x) in [rho x - 2, rho x] for rho >= 0.
LocalPath staircase_path(int n, double rho);

/// Returns a copy of p with endpoint moved to a by flipping |p(n)-a|/2 steps
/// inside the middle third [n/3, 2n/3], chosen left to right with pairwise
/// distance >= n/(10 s).  Throws construction_error on parity mismatch or if
/// the middle third lacks enough flippable steps with that spacing.
LocalPath adjust_endpoint(const LocalPath& p, std::int64_t a);

/// Repeats the block g ell times, retargeting each copy's endpoint via
/// adjust_endpoint so that |f(i m) - rho i m| <= 2 at every block boundary.
/// Requires |g(m) - rho m| <= 10.
LocalPath concatenate(const LocalPath& g, int ell, double rho);

struct FlatnessProfile {
  double max_dev = 0.0;
  int argmax = 0;                  // integer x attaining max_dev
  std::vector<double> deviations;  // |f(k) - rho k| for k = 0..n
};

/// Deviation of p from the line y = rho x, sampled at the integers (where
/// the piecewise-linear deviation attains its extremes).
FlatnessProfile flatness_profile(const LocalPath& p, double rho);

}  // namespace maxrep
