#pragma once

#include <cstdint>

namespace maxrep {

/// phi(1) = 3 - 4 ln 2 exactly.
inline constexpr double kPhiAtOne = 0.22741127776021953;

/// phi(x) = sum_{k>=1} 1 / (k (k+1) (2k+1) x^{2k}).  Series truncated once the
/// next term falls below 1e-18 of the partial sum; absolute error <= 2e-13
/// (worst at x = 1 where the terms decay only cubically).
double phi_series(double x);

/// Memoized phi at integer hook lengths h >= 1; h = 1 uses the exact
/// constant kPhiAtOne, larger h the (there rapidly convergent) series.
double phi_hook(std::int64_t h);

/// Pre-extend the memo table (call before parallel sections).
void phi_reserve(std::int64_t max_h);

}  // namespace maxrep
