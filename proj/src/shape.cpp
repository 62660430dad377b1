#include "maxrep/shape.hpp"

#include <cmath>
#include <stdexcept>

namespace maxrep {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

// sin t - t cos t = sum_{k>=1} (-1)^{k+1} t^{2k+1} (2k)/(2k+1)!,
// alternating with ratio -t^2/(2k(2k+3)); converges fast on [0, pi/2].
long double sin_minus_tcos(long double t) {
  long double t2 = t * t;
  long double term = t * t2 / 3.0L;
  long double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= -t2 / static_cast<long double>(2 * k * (2 * k + 3));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace

long double omega_ld(long double x) {
  long double ax = std::fabs(x);
  if (ax >= 1.0L) return ax;
  long double u = 1.0L - ax;
  long double t = 2.0L * std::asin(std::sqrt(u / 2.0L));
  return ax + (2.0L / kPi) * sin_minus_tcos(t);
}

double omega(double x) { return static_cast<double>(omega_ld(x)); }

double omega_prime(double x) {
  if (std::fabs(x) > 1.0)
    throw std::domain_error("omega_prime: |x| > 1");
  return (2.0 / kPi) * std::asin(x);
}

long double omega_N_ld(long double x, long double N) {
  long double s = std::sqrt(4.0L * N);
  return s * omega_ld(x / s);
}

double omega_N(double x, double N) {
  return static_cast<double>(omega_N_ld(x, N));
}

long double omega_N_prime_ld(long double x, long double N) {
  long double s = std::sqrt(4.0L * N);
  if (std::fabs(x) >= s) return x > 0 ? 1.0L : -1.0L;
  return (2.0L / kPi) * std::asin(x / s);
}

double omega_N_prime(double x, double N) {
  return static_cast<double>(omega_N_prime_ld(x, N));
}

StepFunction staircase_below(int N) {
  if (N <= 0) throw std::invalid_argument("staircase_below: N must be positive");
  long double s = 2.0L * std::sqrt(static_cast<long double>(N));
  std::int64_t L = static_cast<std::int64_t>(std::ceil(s));
  std::vector<std::int8_t> steps(2 * L);
  std::int64_t h = L;
  for (std::int64_t m = -L; m < L; ++m) {
    // Up-step admissible iff the right endpoint stays below Omega_N: the
    // interior follows because Omega is convex with |Omega_N'| < 1 there.
    long double bound = omega_N_ld(static_cast<long double>(m + 1),
                                   static_cast<long double>(N));
    if (static_cast<long double>(h + 1) <= bound) {
      steps[m + L] = 1;
      ++h;
    } else {
      steps[m + L] = -1;
      --h;
    }
  }
  StepFunction f(L, std::move(steps));
  if (!f.is_valid())
    throw std::logic_error("staircase_below: unbalanced greedy path");
  return f;
}

}  // namespace maxrep
