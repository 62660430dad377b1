#include "maxrep/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "maxrep/phi.hpp"
#include "maxrep/shape.hpp"

namespace maxrep {

namespace {

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !std::isfinite(cfg.abs_tol))
    throw std::domain_error("QuadratureConfig: abs_tol must be positive");
  if (!(cfg.tail_radius >= 1.0) || !std::isfinite(cfg.tail_radius))
    throw std::domain_error("QuadratureConfig: tail_radius must be >= 1");
  if (cfg.max_subdivisions < 0)
    throw std::domain_error("QuadratureConfig: max_subdivisions must be >= 0");
}

/// O(1) evaluation of a boundary from its integer heights, plus a divided
/// difference built from anchored slope sums: the numerator is assembled as
/// (exact partial step) + (exact integer difference) + (exact partial step),
/// so its relative error stays at machine level even across the diagonal.
struct ProfileEval {
  std::int64_t off;
  std::vector<std::int64_t> h;  // heights at -off..off
  const std::vector<std::int8_t>* steps;

  explicit ProfileEval(const StepFunction& f)
      : off(f.offset), h(f.heights()), steps(&f.steps) {}

  std::int64_t value_int(std::int64_t k) const {
    if (k <= -off || k >= off) return k < 0 ? -k : k;
    return h[k + off];
  }

  int slope_cell(std::int64_t k) const {  // slope on [k, k+1]
    if (k < -off) return -1;
    if (k >= off) return 1;
    return (*steps)[k + off];
  }

  static std::int64_t cell_of(double x) {
    return static_cast<std::int64_t>(std::floor(x));
  }

  double value(double x) const {
    if (x <= static_cast<double>(-off) || x >= static_cast<double>(off))
      return std::fabs(x);
    const std::int64_t k = cell_of(x);
    return static_cast<double>(h[k + off]) +
           static_cast<double>((*steps)[k + off]) *
               (x - static_cast<double>(k));
  }

  double divided(double x, double y) const {
    if (x == y) return static_cast<double>(slope_cell(cell_of(x)));
    if (x > y) std::swap(x, y);
    const std::int64_t kx = cell_of(x), ky = cell_of(y);
    if (kx == ky) return static_cast<double>(slope_cell(kx));
    const double left =
        slope_cell(kx) * (static_cast<double>(kx + 1) - x);
    const double mid =
        static_cast<double>(value_int(ky) - value_int(kx + 1));
    const double right = slope_cell(ky) * (y - static_cast<double>(ky));
    return (left + mid + right) / (y - x);
  }
};

/// Textbook double-precision Omega_N; value error is a few ulp of 2 sqrt(N),
/// fine whenever it is divided by a separation that is a few percent of the
/// argument scale.
double omega_N_fast(double x, double c) {
  const double t = x / c;
  if (std::fabs(t) >= 1.0) return std::fabs(x);
  return c * ((2.0 / M_PI) * (t * std::asin(t) + std::sqrt(1.0 - t * t)));
}

/// (Omega_N(y) - Omega_N(x)) / (y - x) without diagonal cancellation: plain
/// doubles in the far field, a long-double difference for separations down to
/// ~1e-6 of scale, below that the quotient is the mean of Omega_N' over
/// [x, y] (5-point Gauss-Legendre), which needs no subtraction at all.
double divided_omega(double x, double y, double Nd, double c) {
  if (x == y) return omega_N_prime(x, Nd);
  if (x >= c && y >= c) return 1.0;
  if (x <= -c && y <= -c) return -1.0;
  const double d = y - x;
  const double scale = 1.0 + std::fabs(x) + std::fabs(y);
  if (std::fabs(d) >= 0.03 * scale)
    return (omega_N_fast(y, c) - omega_N_fast(x, c)) / d;
  if (std::fabs(d) >= 1e-6 * scale) {
    const long double diff = omega_N_ld(y, Nd) - omega_N_ld(x, Nd);
    return static_cast<double>(diff / static_cast<long double>(d));
  }
  return gauss5([&](double t) { return omega_N_prime(t, Nd); }, x, y) / d;
}

struct WindowSetup {
  double c;                   // 2 sqrt(N)
  double W0;                  // integer window half-width
  std::vector<double> knots;  // interior breakpoints, strictly increasing
};

/// Full 15-node Gauss-Kronrod layout on [-1, 1], expanded from the symmetric
/// tables: wk are the Kronrod weights, wg the embedded Gauss-7 weights
/// (zero at Kronrod-only nodes).
struct Gk15Nodes {
  double x[15], wk[15], wg[15];
  Gk15Nodes() {
    using namespace quad_detail;
    for (int i = 0; i < 7; ++i) {
      x[i] = -kXgk[i];
      x[14 - i] = kXgk[i];
      wk[i] = kWgk[i];
      wk[14 - i] = kWgk[i];
      wg[i] = 0.0;
      wg[14 - i] = 0.0;
    }
    x[7] = 0.0;
    wk[7] = kWgk[7];
    for (int i = 0; i < 3; ++i) {
      wg[2 * i + 1] = kWg[i];
      wg[13 - 2 * i] = kWg[i];
    }
    wg[7] = kWg[3];
  }
};

const Gk15Nodes& gk15_nodes() {
  static const Gk15Nodes n;
  return n;
}

struct Rect {
  double ax, bx, ay, by;
  double value = 0.0;  // K15 x K15 tensor integral over the rectangle
  double err = 0.0;    // |KK - GK| + |KK - KG|, embedded estimate
  double errx = 0.0, erry = 0.0;
  double weight = 1.0;  // 2 for off-diagonal cell pairs (symmetry)
  int depth = 0;
  bool alive = true;
};

template <class F2>
void eval_rect(const F2& f, Rect& r) {
  const Gk15Nodes& n = gk15_nodes();
  const double cx = 0.5 * (r.ax + r.bx), hx = 0.5 * (r.bx - r.ax);
  const double cy = 0.5 * (r.ay + r.by), hy = 0.5 * (r.by - r.ay);
  double fx[15][15];
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j)
      fx[i][j] = f(cx + hx * n.x[i], cy + hy * n.x[j]);
  double kk = 0.0, gk = 0.0, kg = 0.0;
  for (int i = 0; i < 15; ++i) {
    double row_k = 0.0, row_g = 0.0;
    for (int j = 0; j < 15; ++j) {
      row_k += n.wk[j] * fx[i][j];
      row_g += n.wg[j] * fx[i][j];
    }
    kk += n.wk[i] * row_k;
    kg += n.wk[i] * row_g;
    gk += n.wg[i] * row_k;
  }
  const double scale = hx * hy;
  r.value = scale * kk;
  r.errx = std::fabs(scale * (kk - gk));
  r.erry = std::fabs(scale * (kk - kg));
  r.err = r.errx + r.erry;
}

struct Core2dResult {
  double value = 0.0;
  double err = 0.0;
  std::int64_t rects = 0;
  bool converged = true;
};

/// Integrates f over the union of cell-pair rectangles (upper triangle with
/// weight 2 off the diagonal) by worst-first bisection of embedded tensor
/// Gauss-Kronrod panels until the summed estimate meets abs_tol.
template <class F2>
Core2dResult integrate_cells_2d(const F2& f, const std::vector<double>& edges,
                                double abs_tol, int depth_cap) {
  std::vector<Rect> rects;
  const int m = static_cast<int>(edges.size()) - 1;
  rects.reserve(static_cast<std::size_t>(m) * (m + 1) / 2);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Rect r;
      r.ax = edges[i];
      r.bx = edges[i + 1];
      r.ay = edges[j];
      r.by = edges[j + 1];
      r.weight = (i == j) ? 1.0 : 2.0;
      eval_rect(f, r);
      rects.push_back(r);
    }
  }

  auto key = [&](std::size_t i) { return rects[i].err * rects[i].weight; };
  auto cmp = [&](std::size_t a, std::size_t b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;  // max-heap by weighted estimate
    if (rects[a].ax != rects[b].ax) return rects[a].ax < rects[b].ax;
    return rects[a].ay < rects[b].ay;
  };
  std::vector<std::size_t> heap(rects.size());
  for (std::size_t i = 0; i < rects.size(); ++i) heap[i] = i;
  std::make_heap(heap.begin(), heap.end(), cmp);

  long double est_sum = 0.0L;
  for (const Rect& r : rects) est_sum += r.err * r.weight;

  const std::int64_t kMaxSplits = 200000;
  std::int64_t splits = 0;
  while (est_sum > static_cast<long double>(abs_tol) && !heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const std::size_t pi = heap.back();
    heap.pop_back();
    Rect parent = rects[pi];
    const double wx = parent.bx - parent.ax, wy = parent.by - parent.ay;
    if (parent.depth >= depth_cap || std::max(wx, wy) < 1e-12 ||
        splits >= kMaxSplits) {
      continue;  // stays alive and counted in the total; just not refinable
    }
    ++splits;
    rects[pi].alive = false;
    est_sum -= parent.err * parent.weight;
    // Bisect the direction whose embedded rule struggles more.
    const bool split_x =
        (parent.errx > parent.erry) || (parent.errx == parent.erry && wx >= wy);
    for (int half = 0; half < 2; ++half) {
      Rect ch = parent;
      ch.depth = parent.depth + 1;
      ch.alive = true;
      if (split_x) {
        const double mid = 0.5 * (parent.ax + parent.bx);
        ch.ax = half ? mid : parent.ax;
        ch.bx = half ? parent.bx : mid;
      } else {
        const double mid = 0.5 * (parent.ay + parent.by);
        ch.ay = half ? mid : parent.ay;
        ch.by = half ? parent.by : mid;
      }
      eval_rect(f, ch);
      est_sum += ch.err * ch.weight;
      rects.push_back(ch);
      heap.push_back(rects.size() - 1);
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  }

  Core2dResult out;
  long double v = 0.0L, e = 0.0L;
  for (const Rect& r : rects) {
    if (!r.alive) continue;
    v += static_cast<long double>(r.value) * r.weight;
    e += static_cast<long double>(r.err) * r.weight;
    ++out.rects;
  }
  out.value = static_cast<double>(v);
  out.err = static_cast<double>(e);
  out.converged = out.err <= abs_tol * (1.0 + 1e-9);
  return out;
}

WindowSetup make_window(const StepFunction& f, int N,
                        const QuadratureConfig& cfg) {
  WindowSetup w;
  w.c = 2.0 * std::sqrt(static_cast<double>(N));
  std::int64_t W0i =
      std::max<std::int64_t>(f.offset,
                             static_cast<std::int64_t>(std::ceil(w.c)));
  W0i = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(W0i) * cfg.tail_radius));
  if (W0i > 100000)
    throw std::domain_error("theta_N: window too large (tail_radius)");
  w.W0 = static_cast<double>(W0i);
  for (std::int64_t k = -W0i + 1; k <= W0i - 1; ++k)
    w.knots.push_back(static_cast<double>(k));
  const std::int64_t cr = llround(w.c);
  if (w.c < w.W0 && cr * cr != 4ll * N) {
    w.knots.push_back(-w.c);
    w.knots.push_back(w.c);
    std::sort(w.knots.begin(), w.knots.end());
  }
  return w;
}

}  // namespace

double tilde_theta(const StepFunction& f) {
  if (!f.is_valid())
    throw std::invalid_argument("tilde_theta: invalid step function");
  std::vector<std::int64_t> hooks = hooks_from_steps(f);
  std::sort(hooks.begin(), hooks.end());  // canonical summation order
  double acc = 0.0;
  for (std::int64_t h : hooks) acc += phi_hook(h);
  return acc;
}

QuadratureResult theta_N(const StepFunction& f, int N,
                         const QuadratureConfig& cfg) {
  validate(cfg);
  if (!f.is_valid())
    throw std::invalid_argument("theta_N: invalid step function");
  if (N < 1) throw std::invalid_argument("theta_N: N must be >= 1");
  const double Nd = static_cast<double>(N);
  const int depth = std::clamp(cfg.max_subdivisions, 0, 48);
  const WindowSetup w = make_window(f, N, cfg);
  const ProfileEval P(f);

  auto d2 = [&](double x, double y) {
    const double d = P.divided(x, y) - divided_omega(x, y, Nd, w.c);
    return d * d;
  };

  // Square core [-W0, W0]^2, decomposed into cell-pair rectangles along the
  // breakpoint grid and refined worst-first against the summed estimate.
  std::vector<double> edges;
  edges.reserve(w.knots.size() + 2);
  edges.push_back(-w.W0);
  edges.insert(edges.end(), w.knots.begin(), w.knots.end());
  edges.push_back(w.W0);
  const Core2dResult core =
      integrate_cells_2d(d2, edges, 0.5 * cfg.abs_tol, depth);

  // One-sided tails: g vanishes at the outer argument, and the y-integral of
  // 1/(x-y)^2 over each half-line is exact.
  auto tail_integrand = [&](double x) {
    const double gx = P.value(x) - omega_N(x, Nd);
    return gx * gx * (1.0 / (w.W0 - x) + 1.0 / (x + w.W0));
  };
  const QuadratureResult tail = integrate_with_breaks(
      tail_integrand, -w.W0, w.W0, w.knots.data(),
      static_cast<int>(w.knots.size()), cfg.abs_tol / 16.0, depth);

  QuadratureResult out;
  out.value = core.value + 2.0 * tail.value;
  out.error = core.err + 2.0 * tail.error + 1e-14 * std::fabs(out.value);
  out.panels = tail.panels +
               static_cast<int>(std::min<std::int64_t>(core.rects, 1 << 30));
  out.converged = true;
  if (out.error > cfg.abs_tol) {
    throw convergence_error("theta_N: quadrature tolerance not reached",
                            out.value, out.error);
  }
  return out;
}

QuadratureResult bar_theta_N(const StepFunction& f, int N,
                             const QuadratureConfig& cfg) {
  validate(cfg);
  if (!f.is_valid())
    throw std::invalid_argument("bar_theta_N: invalid step function");
  if (N < 1) throw std::invalid_argument("bar_theta_N: N must be >= 1");
  const double c = 2.0 * std::sqrt(static_cast<double>(N));
  const ProfileEval P(f);

  // Antiderivatives on [c, inf): with A = arccosh(x/c), S = sqrt(x^2 - c^2),
  //   Int A dx   = x A - S,
  //   Int x A dx = ((2x^2 - c^2)/4) A - (x/4) S.
  auto A = [&](double x) { return std::acosh(x / c); };
  auto S = [&](double x) { return std::sqrt((x - c) * (x + c)); };
  auto IA1 = [&](double x) { return x * A(x) - S(x); };
  auto IAx = [&](double x) {
    return 0.25 * (2.0 * x * x - c * c) * A(x) - 0.25 * x * S(x);
  };

  double value = 0.0;
  double mag = 0.0;
  int pieces = 0;
  // side = +1 integrates over x in [c, off]; side = -1 is mirrored into the
  // same coordinates via u = -x, where the boundary has value f(-u) and the
  // cell [k, k+1] in u corresponds to [-k-1, -k] with negated slope.
  for (int side : {+1, -1}) {
    const std::int64_t k0 =
        static_cast<std::int64_t>(std::floor(c));
    for (std::int64_t k = k0; k <= P.off - 1; ++k) {
      const double p = std::max(c, static_cast<double>(k));
      const double q = static_cast<double>(k + 1);
      if (q <= p) continue;
      std::int64_t v;
      int s;
      if (side > 0) {
        v = P.value_int(k);
        s = P.slope_cell(k);
      } else {
        v = P.value_int(-k);
        s = -P.slope_cell(-k - 1);
      }
      // f - |x| on the piece, written as beta + stilde * x.
      const double beta = static_cast<double>(v - s * k);
      const double stilde = static_cast<double>(s - 1);
      if (beta == 0.0 && stilde == 0.0) continue;
      const double t1 = beta * (IA1(q) - IA1(p));
      const double t2 = stilde * (IAx(q) - IAx(p));
      value += t1 + t2;
      mag += std::fabs(t1) + std::fabs(t2);
      ++pieces;
    }
  }
  if (value < 0.0 && value > -1e-12 * (1.0 + mag)) value = 0.0;

  QuadratureResult out;
  out.value = value;
  out.error = 1e-14 * mag;
  out.panels = pieces;
  out.converged = true;
  return out;
}

double vk_residual(const Partition& lambda, const QuadratureConfig& cfg) {
  const int N = lambda.size();
  if (N < 1) throw std::invalid_argument("vk_residual: empty partition");
  const StepFunction f = to_step_function(lambda);
  const QuadratureResult th = theta_N(f, N, cfg);
  const QuadratureResult br = bar_theta_N(f, N, cfg);
  const double tt = tilde_theta(f);

  long double lhs = 0.0L;
  for (int h : hook_lengths(lambda))
    lhs += std::log(static_cast<long double>(h));
  lhs = 2.0L * lhs -
        static_cast<long double>(N) *
            std::log(static_cast<long double>(N)) +
        static_cast<long double>(N);

  const long double rhs = static_cast<long double>(th.value) / 8.0L +
                          static_cast<long double>(tt) +
                          static_cast<long double>(br.value);
  return static_cast<double>(lhs - rhs);
}

EnergyBreakdown energy_breakdown(const StepFunction& f, int N,
                                 const QuadratureConfig& cfg) {
  const QuadratureResult th = theta_N(f, N, cfg);
  const QuadratureResult br = bar_theta_N(f, N, cfg);
  EnergyBreakdown b;
  b.theta = th.value;
  b.tilde_theta = tilde_theta(f);
  b.bar_theta = br.value;
  b.total = b.theta / 8.0 + b.tilde_theta;
  b.quad_error = th.error + br.error;
  return b;
}

std::string to_json(const EnergyBreakdown& b) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"theta\":%.17g,\"tilde_theta\":%.17g,\"bar_theta\":%.17g,"
                "\"total\":%.17g,\"quad_error\":%.17g}",
                b.theta, b.tilde_theta, b.bar_theta, b.total, b.quad_error);
  return buf;
}

}  // namespace maxrep
