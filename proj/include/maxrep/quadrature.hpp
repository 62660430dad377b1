#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace maxrep {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated error estimate
  int panels = 0;      // evaluated Kronrod panels
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    panels += o.panels;
    converged = converged && o.converged;
    return *this;
  }
};

namespace quad_detail {

// QUADPACK qk15 nodes on [-1,1]; even nodes are the Gauss-7 subset.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

}  // namespace quad_detail

/// One Gauss7/Kronrod15 panel on [a,b]; err is |K15 - G7| and resabs is the
/// Kronrod sum of |f|, the scale against which err is pure roundoff.
template <class F>
inline void gk15_panel(F&& f, double a, double b, double& value, double& err,
                       double& resabs) {
  using namespace quad_detail;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double k15 = kWgk[7] * fv[7], g7 = kWg[3] * fv[7];
  double kab = kWgk[7] * std::fabs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    k15 += kWgk[i] * (fv[i] + fv[14 - i]);
    kab += kWgk[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
  }
  for (int i = 0; i < 3; ++i) g7 += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  value = h * k15;
  err = std::fabs(h * (k15 - g7));
  resabs = std::fabs(h) * kab;
}

template <class F>
inline void gk15_panel(F&& f, double a, double b, double& value, double& err) {
  double resabs;
  gk15_panel(f, a, b, value, err, resabs);
}

/// Adaptive Gauss-Kronrod on [a,b] to absolute tolerance abs_tol.
/// noise_per_width > 0 declares that f itself carries absolute noise of that
/// size per unit length (e.g. an inner quadrature): panels whose error
/// estimate is below noise * width are accepted, since refining them further
/// only chases the noise.  Accepted estimates still accumulate into .error.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol,
                           int max_depth = 48, double noise_per_width = 0.0) {
  QuadratureResult out;
  if (a == b) return out;

  struct Frame {
    double a, b, tol;
    int depth;
  };
  // Explicit stack; worst-first is unnecessary since tolerance is split.
  Frame stack[2048];
  int top = 0;
  stack[top++] = {a, b, abs_tol, 0};
  while (top > 0) {
    Frame fr = stack[--top];
    double v, e, resabs;
    gk15_panel(f, fr.a, fr.b, v, e, resabs);
    ++out.panels;
    // Refining below the roundoff floor of the panel only chases the
    // jitter of f's own evaluation, so such estimates count as converged.
    const double round_tol = 25.0 * 2.220446049250313e-16 * resabs;
    const double floor_tol =
        std::max(noise_per_width * (fr.b - fr.a), round_tol);
    if (e <= fr.tol || e <= floor_tol || fr.depth >= max_depth || top > 2040) {
      out.value += v;
      out.error += e;
      if (e > fr.tol && e > floor_tol) out.converged = false;
      continue;
    }
    double m = 0.5 * (fr.a + fr.b), t = 0.5 * fr.tol;
    stack[top++] = {fr.a, m, t, fr.depth + 1};
    stack[top++] = {m, fr.b, t, fr.depth + 1};
  }
  return out;
}

/// Adaptive integration with interior breakpoints (integrand may be
/// non-smooth there); pts must be sorted and inside [a,b].
template <class F>
QuadratureResult integrate_with_breaks(F&& f, double a, double b,
                                       const double* pts, int npts,
                                       double abs_tol, int max_depth = 48,
                                       double noise_per_width = 0.0) {
  QuadratureResult out;
  double lo = a;
  int segments = npts + 1;
  for (int i = 0; i <= npts; ++i) {
    double hi = (i == npts) ? b : pts[i];
    if (hi > lo)
      out += integrate(f, lo, hi, abs_tol / segments, max_depth,
                       noise_per_width);
    lo = hi;
  }
  return out;
}

/// Fixed 5-point Gauss-Legendre on [a,b] (no error estimate).
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr double x[2] = {0.538469310105683, 0.906179845938664};
  static constexpr double w[3] = {0.568888888888889, 0.478628670499366,
                                  0.236926885056189};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = w[0] * f(c);
  s += w[1] * (f(c - h * x[0]) + f(c + h * x[0]));
  s += w[2] * (f(c - h * x[1]) + f(c + h * x[1]));
  return h * s;
}

}  // namespace maxrep
