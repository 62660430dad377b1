#pragma once

#include "maxrep/step_function.hpp"

namespace maxrep {

/// Limit shape: (2/pi)(x asin x + sqrt(1-x^2)) for |x| <= 1, |x| outside.
/// Evaluated via Omega(cos t) = cos t + (2/pi)(sin t - t cos t) with
/// t = 2 asin(sqrt((1-|x|)/2)), which is cancellation-free near |x| = 1.
double omega(double x);
long double omega_ld(long double x);

/// (2/pi) asin x; throws std::domain_error for |x| > 1.
double omega_prime(double x);

/// Omega_N(x) = sqrt(4N) Omega(x / sqrt(4N)).
double omega_N(double x, double N);
long double omega_N_ld(long double x, long double N);

/// d/dx Omega_N: (2/pi) asin(x/sqrt(4N)) inside, sign(x) outside (C^1 glue).
double omega_N_prime(double x, double N);
long double omega_N_prime_ld(long double x, long double N);

/// Maximal step function below Omega_N (greedy, pointwise maximal);
/// window offset = ceil(2 sqrt(N)).
StepFunction staircase_below(int N);

}  // namespace maxrep
