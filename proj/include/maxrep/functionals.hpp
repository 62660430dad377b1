#pragma once

#include <stdexcept>
#include <string>

#include "maxrep/partition.hpp"
#include "maxrep/quadrature.hpp"
#include "maxrep/step_function.hpp"

namespace maxrep {

/// Knobs for the quadrature-backed functionals.
struct QuadratureConfig {
  /// Total absolute error budget per functional evaluation.
  double abs_tol = 1e-8;
  /// Adaptive bisection depth per panel (clamped to [0, 48]).
  int max_subdivisions = 48;
  /// Multiplier (>= 1) on the minimal window beyond which the one-sided
  /// tails are handled by the exact formula; > 1 only adds zero cells.
  double tail_radius = 1.0;
};

/// The three energies of a rescaled boundary, as reported to callers.
/// total = theta / 8 + tilde_theta; bar_theta is kept separate.
struct EnergyBreakdown {
  double theta = 0.0;
  double tilde_theta = 0.0;
  double bar_theta = 0.0;
  double total = 0.0;
  double quad_error = 0.0;
};

/// Quadrature failed to reach the requested tolerance; carries the best
/// estimate so callers can still inspect the value.
struct convergence_error : std::runtime_error {
  convergence_error(const std::string& msg, double best, double err)
      : std::runtime_error(msg), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

/// Hook weight of a boundary: sum of phi(h) over the hook multiset.
double tilde_theta(const StepFunction& f);

/// theta_N(f) = Int Int ((g(x) - g(y)) / (x - y))^2 dx dy over the whole
/// plane, g = f - Omega_N.  The window [-W0, W0] with
/// W0 = max(f.offset, ceil(2 sqrt(N))) contains the support of g; inside it
/// the double integral is evaluated by iterated adaptive Gauss-Kronrod with
/// breakpoints at the integer knots and +-2 sqrt(N), with divided differences
/// computed from anchored slope sums (no cancellation near the diagonal).
/// Outside, g vanishes at one argument and the y-integral is exact:
/// the tails reduce to Int g(x)^2 [1/(W0 - x) + 1/(x + W0)] dx.
/// The partition size of f need not equal N.  Throws convergence_error when
/// the error estimate exceeds cfg.abs_tol.
QuadratureResult theta_N(const StepFunction& f, int N,
                         const QuadratureConfig& cfg = {});

/// bar_theta_N(f) = Int_{|x| >= 2 sqrt(N)} (f(x) - |x|) arccosh(|x| / 2
/// sqrt(N)) dx, in closed form per linear piece of f (the antiderivatives of
/// arccosh and x arccosh); exactly 0.0 when f = |x| beyond +-2 sqrt(N).
QuadratureResult bar_theta_N(const StepFunction& f, int N,
                             const QuadratureConfig& cfg = {});

/// Residual of the hook-product identity
///   log(prod h^2 / (N/e)^N) = theta_N(f)/8 + tilde_theta(f) + bar_theta_N(f)
/// for the boundary f of lambda, N = |lambda|.  Exact identity: the result is
/// bounded by the propagated quadrature error.
double vk_residual(const Partition& lambda, const QuadratureConfig& cfg = {});

/// All three energies of f against the size-N shape in one call.
EnergyBreakdown energy_breakdown(const StepFunction& f, int N,
                                 const QuadratureConfig& cfg = {});

/// Compact JSON object {"theta": ..., "tilde_theta": ..., "bar_theta": ...,
/// "total": ..., "quad_error": ...} with round-trippable doubles.
std::string to_json(const EnergyBreakdown& b);

}  // namespace maxrep
