#pragma once

// Quadrature- and closed-form-based references for the energy functionals.
// Structurally independent of the library's closed-form pair integrals: the
// checks here go straight at the defining double integrals.

#include <cmath>
#include <cstdint>
#include <vector>

#include "maxrep/local_energy.hpp"
#include "maxrep/quadrature.hpp"

namespace oracle {

/// phi via partial fractions: 1/(k(k+1)(2k+1)) = 1/k + 1/(k+1) - 4/(2k+1)
/// summed in closed form.  phi(x) = (1+x^2) ln(x^2/(x^2-1)) - 4x artanh(1/x) + 3.
/// Valid for x > 1 (use 3 - 4 ln 2 at x = 1).
inline double phi_closed(double x) {
  // Long double internals: the three terms cancel down to ~x^{-2}/6, so the
  // extended mantissa is needed to keep the reference meaningful at x ~ 100.
  const long double xl = x;
  const long double x2 = xl * xl;
  const long double r = (1.0L + x2) * (-std::log1p(-1.0L / x2)) -
                        4.0L * xl * std::atanh(1.0L / xl) + 3.0L;
  return static_cast<double>(r);
}

/// Piecewise-linear evaluation of a lattice path from its heights.
inline double path_value(const std::vector<std::int64_t>& h,
                         const maxrep::LocalPath& f, double x) {
  int k = static_cast<int>(std::floor(x));
  if (k < 0) k = 0;
  if (k >= f.n()) k = f.n() - 1;
  return static_cast<double>(h[k]) + static_cast<double>(f.steps[k]) * (x - k);
}

/// theta_n^rho(f) by brute-force nested adaptive quadrature over every
/// ordered cell pair.  abs_tol is the total absolute error target.
inline double theta_quad(const maxrep::LocalPath& f, double rho, double abs_tol = 1e-10) {
  const int n = f.n();
  const auto h = f.heights();
  const double pair_tol = abs_tol / (static_cast<double>(n) * n + 1.0);
  long double total = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto inner = [&](double x) {
        return maxrep::integrate(
                   [&](double y) {
                     const double dxy = y - x;
                     double q;
                     if (std::fabs(dxy) < 1e-13) {
                       q = static_cast<double>(f.steps[j]);
                     } else {
                       q = (path_value(h, f, y) - path_value(h, f, x)) / dxy;
                     }
                     const double d = q - rho;
                     return d * d;
                   },
                   static_cast<double>(j), static_cast<double>(j + 1), pair_tol)
            .value;
      };
      total += maxrep::integrate(inner, static_cast<double>(i),
                                 static_cast<double>(i + 1), pair_tol)
                   .value;
    }
  }
  return static_cast<double>(total);
}

/// Single cell-pair energy by 2D quadrature in the gap coordinates
/// (u, v) in [0,1]^2 with separation c + u + v; numerator a + p u + q v.
inline double pair_quad(std::int64_t c, std::int64_t a, int p, int q, double rho,
                        double abs_tol = 1e-12) {
  auto inner = [&](double u) {
    return maxrep::integrate(
               [&](double v) {
                 const double num = static_cast<double>(a) + p * u + q * v;
                 const double den = static_cast<double>(c) + u + v;
                 const double d = num / den - rho;
                 return d * d;
               },
               0.0, 1.0, abs_tol)
        .value;
  };
  return maxrep::integrate(inner, 0.0, 1.0, abs_tol).value;
}

}  // namespace oracle
