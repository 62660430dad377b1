#pragma once

#include <cstdint>
#include <vector>

#include "maxrep/local_energy.hpp"

namespace maxrep {

enum class SigmaKind { exact, heuristic_upper };

struct SigmaRecord {
  int n = 0;
  double rho = 0.0;
  double value = 0.0;
  LocalPath witness;
  SigmaKind kind = SigmaKind::exact;
  std::uint64_t seed = 0;  // meaningful for heuristic records only
};

inline constexpr int kSigmaExactCeiling = 28;

/// Exact sigma_n^rho = min over all 2^n paths of Theta_n^rho, by
/// branch-and-bound with the suffix-sigma lower bound.  The returned value is
/// the canonical big_theta_local of the witness; the witness is the
/// lexicographically smallest minimizer ('+' < '-') for rho >= 0, and the
/// reverse-negation of that for rho < 0 (the tilde-preserving bijection, so
/// value == big_theta_local(witness, rho) bitwise in both cases).  Throws
/// resource_limit_error above ceiling.
SigmaRecord sigma_exact(int n, double rho, int ceiling = kSigmaExactCeiling);

/// All of sigma_1..sigma_n in one bottom-up run (the by-product table of
/// sigma_exact(n, ...)).
std::vector<SigmaRecord> sigma_exact_upto(int n, double rho,
                                          int ceiling = kSigmaExactCeiling);

/// Default annealing budget used when budget == 0 is passed.
std::uint64_t sigma_default_budget(int n);

/// Simulated-annealing upper bound on sigma_n^rho: moves are single-step
/// flips and endpoint-preserving opposite-pair flips, geometric cooling with
/// a budget-independent schedule (so the value is non-increasing in budget
/// for a fixed seed).  Deterministic given (n, rho, budget, seed).
SigmaRecord sigma_heuristic(int n, double rho, std::uint64_t budget, std::uint64_t seed);

/// Independent seeded chains (parallel); returns the best record, ties going
/// to the smallest seed.
SigmaRecord sigma_heuristic_multi(int n, double rho, std::uint64_t budget,
                                  const std::vector<std::uint64_t>& seeds);

}  // namespace maxrep
