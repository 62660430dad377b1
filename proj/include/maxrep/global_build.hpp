#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxrep/functionals.hpp"
#include "maxrep/step_function.hpp"

namespace maxrep {

/// One concatenation window of a constructed shape.
struct WindowReport {
  std::int64_t x_start = 0;  // left endpoint (integer abscissa)
  int length = 0;            // window length m (last window may be truncated)
  double rho = 0.0;          // Omega_N' at x_start
  double local_total = 0.0;  // Theta_m^rho of the local path placed here
};

/// A constructed near-optimal shape together with its diagnostics.
struct BuildReport {
  StepFunction f;
  std::int64_t N_target = 0;
  EnergyBreakdown breakdown;  // energies of f against the size-N_target shape
  double log_dim = 0.0;       // log dim of the partition of f (area(f) cells)
  int window_size = 0;
  std::vector<WindowReport> windows;
};

/// Builds a near-optimizer of Theta_N by concatenating near-minimizing local
/// paths along the maximal staircase below Omega_N.  The staircase is kept
/// outside [-(L - margin), L - margin] with L = floor(2 sqrt(N)) and
/// margin = 4 * window; inside, consecutive windows of the given length (the
/// last one truncated) carry local paths with slope target rho_i =
/// Omega_N'(x_{i-1}), endpoint-adjusted so that f agrees with the staircase
/// at every window boundary.  When margin >= L the region is empty and f is
/// the staircase itself.  The report is pre-area-fix: area(f) is close to,
/// but generally not equal to, N.
///
/// Preconditions: N >= 100, window in [8, 64] (std::invalid_argument).
/// Throws construction_error, naming the window, if no candidate path admits
/// the required endpoint adjustment.
BuildReport build_near_optimizer(std::int64_t N, int window);

/// Corrects the area of a valid profile to exactly N by the minimal surgery
/// family f_{z,r}(x) = min(f(0)+x, f(x)+R, g_{z,r}(x)) on [0, z], where
/// g_{z,r} walks left from (z, f(z)) with r up-steps, one down-step, and an
/// upward ray, guarded below by f (deficit case; the surplus case carves
/// mirrored candidates max(f(0)-x, f(x)-R, ...) downward).  Scans z ascending
/// then r ascending and returns the first exact hit; one exists whenever the
/// largest candidate absorbs the discrepancy, because the area moves by at
/// most one cell per (z, r) step.  The cap R is the smallest even value >= 6
/// whose sweep capacity covers the discrepancy.  z ranges past the window
/// offset (a lift may extend the deviation region, e.g. growing a box shape
/// by one cell), so the result's window can be wider than the input's; it is
/// returned normalized.
///
/// Postconditions: area = N exactly; f <= f' <= f + R pointwise (deficit) or
/// f - R <= f' <= f (surplus); f' = f outside (0, z).
/// Throws construction_error when the discrepancy exceeds the sweep range,
/// std::invalid_argument if f is not a valid profile.
StepFunction area_fix(const StepFunction& f, std::int64_t N);

/// Window-decomposition diagnostic for the lower-bound mechanism:
/// sum_local = sum of Theta_window^{rho_i}(g_i) over consecutive windows of
/// [-(L - window), L - window] with g_i(x) = f(x_{i-1} + x) - f(x_{i-1}) and
/// rho_i = Omega_N'(x_{i-1}); global = Theta_N(f); slack = global - sum_local
/// (bounded below by -C N^{3 eps} in the limit theory).
struct WindowDecomposition {
  double sum_local = 0.0;
  double global = 0.0;
  double slack = 0.0;
};

WindowDecomposition window_decomposition(const StepFunction& f,
                                         std::int64_t N, int window);

/// How a candidate shape scores against a working estimate d_hat of the
/// normalized limit: normalized = -log(dim / sqrt(N!)) / sqrt(N) with
/// N = area(f), and gap = normalized - d_hat.
struct CandidateReport {
  std::int64_t N = 0;
  double log_dim = 0.0;
  double normalized = 0.0;
  double gap = 0.0;
};

/// Throws std::invalid_argument for the empty profile (area 0) or invalid f.
CandidateReport evaluate_candidate(const StepFunction& f, double d_hat);

/// {"N_target":..., "window_size":..., "area":..., "log_dim":...,
///  "breakdown":{...}, "windows":[{"x_start":...,...}, ...], "f":"<rle>"}
std::string to_json(const BuildReport& r);

/// {"N":..., "log_dim":..., "normalized":..., "gap":...}
std::string to_json(const CandidateReport& r);

}  // namespace maxrep
