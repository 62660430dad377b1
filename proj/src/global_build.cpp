#include "maxrep/global_build.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "maxrep/path_ops.hpp"
#include "maxrep/shape.hpp"
#include "maxrep/sigma.hpp"

namespace maxrep {

namespace {

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

double log_dim_from_hooks(const StepFunction& f) {
  const std::vector<std::int64_t> hooks = hooks_from_steps(f);
  long double s = lgammal(static_cast<long double>(hooks.size()) + 1.0L);
  for (const std::int64_t h : hooks) s -= std::log(static_cast<long double>(h));
  return static_cast<double>(s);
}

int checked_int_N(std::int64_t N, const char* who) {
  if (N > std::numeric_limits<int>::max())
    throw std::invalid_argument(std::string(who) + ": N out of range");
  return static_cast<int>(N);
}

// ---------------------------------------------------------------------------
// area_fix: the (z, r) surgery sweep
// ---------------------------------------------------------------------------

// Candidate heights at integer x in [0, z].  H holds the heights of f
// (H[k] = f(k - off)).  The deficit candidate lifts f by walking left from
// (z, f(z)) with r up-steps, one down-step, and an upward ray, guarded below
// by f and clipped with min(f(0)+x, f(x)+R); the surplus candidate is the
// mirror image carved downward.
struct Surgery {
  const std::vector<std::int64_t>& H;
  std::int64_t off;
  std::int64_t R;
  bool deficit;

  std::int64_t f_at(std::int64_t x) const {
    return H[static_cast<std::size_t>(x + off)];
  }

  std::int64_t height(std::int64_t z, std::int64_t r, std::int64_t x) const {
    const std::int64_t fx = f_at(x);
    const std::int64_t fz = f_at(z);
    if (deficit) {
      std::int64_t g;
      if (x >= z - r) {
        g = fz + z - x;
      } else if (x == z - r - 1) {
        g = std::max(fx, fz + 2 * r - z + x);
      } else {
        g = std::max(fx, fz - 2 + z - x);
      }
      return std::min({f_at(0) + x, fx + R, g});
    }
    std::int64_t g;
    if (x >= z - r) {
      g = fz - z + x;
    } else if (x == z - r - 1) {
      g = std::min(fx, fz + z - 2 * r - x);
    } else {
      g = std::min(fx, fz + 2 - z + x);
    }
    return std::max({f_at(0) - x, fx - R, g});
  }

  // Signed area change of candidate (z, r) in cells: half the (even) sum of
  // height differences over the interior 1..z-1; the endpoints never move.
  std::int64_t gain(std::int64_t z, std::int64_t r) const {
    std::int64_t s = 0;
    for (std::int64_t x = 1; x < z; ++x) s += height(z, r, x) - f_at(x);
    return s / 2;
  }
};

StepFunction materialize(const StepFunction& f, const Surgery& s,
                         std::int64_t z, std::int64_t r) {
  StepFunction out = f;
  std::int64_t prev = s.height(z, r, 0);
  for (std::int64_t x = 1; x <= z; ++x) {
    const std::int64_t cur = s.height(z, r, x);
    out.steps[static_cast<std::size_t>(x - 1 + f.offset)] =
        static_cast<std::int8_t>(cur - prev);
    prev = cur;
  }
  return out;
}

// Widen the window to the given offset; padding cells carry the |x| slopes.
StepFunction extend_window(const StepFunction& f, std::int64_t off) {
  if (off <= f.offset) return f;
  StepFunction out;
  out.offset = off;
  out.steps.assign(static_cast<std::size_t>(off - f.offset), -1);
  out.steps.insert(out.steps.end(), f.steps.begin(), f.steps.end());
  out.steps.resize(static_cast<std::size_t>(2 * off), 1);
  return out;
}

}  // namespace

StepFunction area_fix(const StepFunction& f, std::int64_t N) {
  if (!f.is_valid()) throw std::invalid_argument("area_fix: invalid profile");
  if (N < 0) throw std::invalid_argument("area_fix: negative target");
  const std::int64_t A = area(f);
  const std::int64_t target = N - A;
  if (target == 0) return f;
  const std::int64_t need = std::llabs(target);

  // Sweep domain: past the asymptotic sqrt(N) locality so small windows stay
  // fixable (a lift may push the deviation beyond the current window, and a
  // one-cell surgery already needs z = offset + 1 on boxy shapes).  The
  // first-hit rule keeps the accepted surgery as local as the family allows.
  const std::int64_t zmax =
      std::max<std::int64_t>(
          static_cast<std::int64_t>(
              std::floor(std::sqrt(static_cast<double>(std::max(N, A))))),
          f.offset + 2) +
      need;
  const StepFunction base = extend_window(f, zmax);
  const std::vector<std::int64_t> H = base.heights();

  Surgery s{H, base.offset, 0, target > 0};
  // Smallest even cap R >= 6 whose sweep can absorb the discrepancy; beyond
  // 2 zmax the clip at f +- R never binds, so capacity has saturated.
  std::int64_t capacity = 0;
  for (std::int64_t R = 6; R <= 2 * zmax + 6; R += 2) {
    s.R = R;
    capacity = 0;
    for (std::int64_t z = 1; z <= zmax && capacity < need; ++z)
      capacity = std::max<std::int64_t>(capacity, std::llabs(s.gain(z, z)));
    if (capacity >= need) break;
  }
  if (capacity < need) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "area_fix: discrepancy %lld exceeds sweep capacity %lld "
                  "(area %lld, target %lld)",
                  static_cast<long long>(target),
                  static_cast<long long>(capacity), static_cast<long long>(A),
                  static_cast<long long>(N));
    throw construction_error(buf);
  }

  // z ascending, r ascending, first exact hit.  Within one z the gain moves
  // by one cell at a time, so a run whose endpoints straddle the target
  // contains it.
  for (std::int64_t z = 1; z <= zmax; ++z) {
    const std::int64_t lo = s.gain(z, 0), hi = s.gain(z, z);
    if (std::min(lo, hi) > target || std::max(lo, hi) < target) continue;
    for (std::int64_t r = 0; r <= z; ++r) {
      if (s.gain(z, r) != target) continue;
      StepFunction out = materialize(base, s, z, r);
      if (!out.is_valid() || area(out) != N)
        throw std::logic_error("area_fix: surgery produced a broken profile");
      out.normalize();
      return out;
    }
  }
  throw construction_error("area_fix: sweep found no exact hit");
}

// ---------------------------------------------------------------------------
// build_near_optimizer
// ---------------------------------------------------------------------------

namespace {

// Windows short enough for the exact branch-and-bound; longer ones use the
// seeded annealer.
constexpr int kExactWindowCeiling = 20;

struct WindowTask {
  std::int64_t x_start = 0;
  int m = 0;
  double rho = 0.0;
  std::int64_t a = 0;  // required endpoint: staircase rise over the window
  LocalPath base;      // the staircase's own steps (always endpoint-exact)
};

struct WindowChoice {
  LocalPath path;
  double local_total = 0.0;
};

// Best endpoint-adjusted candidate for one window: a near-minimizer of
// Theta_m^rho, the maximal staircases under the slopes rho and a/m, and the
// staircase restriction itself (which needs no adjustment, so a choice
// always exists unless every adjustment throws).
WindowChoice solve_window(const WindowTask& t) {
  std::vector<LocalPath> cands;
  if (t.m <= kExactWindowCeiling) {
    cands.push_back(sigma_exact(t.m, t.rho).witness);
  } else {
    cands.push_back(sigma_heuristic_multi(t.m, t.rho, 0, {1, 2, 3}).witness);
  }
  cands.push_back(staircase_path(t.m, t.rho));
  cands.push_back(
      staircase_path(t.m, static_cast<double>(t.a) / static_cast<double>(t.m)));
  cands.push_back(t.base);

  bool found = false;
  WindowChoice keep;
  for (const LocalPath& c : cands) {
    LocalPath adj;
    try {
      adj = adjust_endpoint(c, t.a);
    } catch (const construction_error&) {
      continue;
    }
    const double val = big_theta_local(adj, t.rho);
    if (!found || val < keep.local_total) {
      keep = {std::move(adj), val};
      found = true;
    }
  }
  if (!found) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "build_near_optimizer: endpoint adjustment infeasible in "
                  "window [%lld, %lld)",
                  static_cast<long long>(t.x_start),
                  static_cast<long long>(t.x_start + t.m));
    throw construction_error(buf);
  }
  return keep;
}

}  // namespace

BuildReport build_near_optimizer(std::int64_t N, int window) {
  if (N < 100)
    throw std::invalid_argument("build_near_optimizer: N must be >= 100");
  if (window < 8 || window > 64)
    throw std::invalid_argument("build_near_optimizer: window outside [8, 64]");
  const int Ni = checked_int_N(N, "build_near_optimizer");

  BuildReport rep;
  rep.N_target = N;
  rep.window_size = window;
  rep.f = staircase_below(Ni);

  const std::int64_t off = rep.f.offset;
  const std::int64_t L =
      static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(N))));
  const std::int64_t margin = 4LL * window;
  const std::int64_t X0 = -(L - margin), X1 = L - margin;

  if (X0 < X1) {
    const std::vector<std::int64_t> pins = rep.f.heights();
    std::vector<WindowTask> tasks;
    for (std::int64_t x = X0; x < X1;) {
      WindowTask t;
      t.x_start = x;
      t.m = static_cast<int>(std::min<std::int64_t>(window, X1 - x));
      t.rho = omega_N_prime(static_cast<double>(x), static_cast<double>(N));
      t.a = pins[static_cast<std::size_t>(x + t.m + off)] -
            pins[static_cast<std::size_t>(x + off)];
      t.base.steps.assign(rep.f.steps.begin() + (x + off),
                          rep.f.steps.begin() + (x + t.m + off));
      x += t.m;
      tasks.push_back(std::move(t));
    }

    std::vector<WindowChoice> picked(tasks.size());
    std::vector<std::string> failures(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
      try {
        picked[static_cast<std::size_t>(i)] =
            solve_window(tasks[static_cast<std::size_t>(i)]);
      } catch (const construction_error& e) {
        failures[static_cast<std::size_t>(i)] = e.what();
      }
    }
    for (const std::string& msg : failures)
      if (!msg.empty()) throw construction_error(msg);

    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const WindowTask& t = tasks[i];
      const WindowChoice& c = picked[i];
      std::copy(c.path.steps.begin(), c.path.steps.end(),
                rep.f.steps.begin() + (t.x_start + off));
      rep.windows.push_back({t.x_start, t.m, t.rho, c.local_total});
    }
  }

  if (!rep.f.is_valid())
    throw std::logic_error("build_near_optimizer: assembled profile invalid");
  rep.breakdown = energy_breakdown(rep.f, Ni);
  rep.log_dim = log_dim_from_hooks(rep.f);
  return rep;
}

// ---------------------------------------------------------------------------
// window_decomposition
// ---------------------------------------------------------------------------

WindowDecomposition window_decomposition(const StepFunction& f,
                                         std::int64_t N, int window) {
  if (!f.is_valid())
    throw std::invalid_argument("window_decomposition: invalid profile");
  if (window < 1)
    throw std::invalid_argument("window_decomposition: window must be >= 1");
  if (N < 1) throw std::invalid_argument("window_decomposition: N must be >= 1");
  const int Ni = checked_int_N(N, "window_decomposition");

  WindowDecomposition out;
  const std::int64_t L =
      static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(N))));
  const std::int64_t X0 = -(L - window), X1 = L - window;
  for (std::int64_t x = X0; x < X1;) {
    const int m = static_cast<int>(std::min<std::int64_t>(window, X1 - x));
    LocalPath g;
    g.steps.resize(static_cast<std::size_t>(m));
    std::int64_t prev = f.value_at(x);
    for (int j = 1; j <= m; ++j) {
      const std::int64_t cur = f.value_at(x + j);
      g.steps[static_cast<std::size_t>(j - 1)] =
          static_cast<std::int8_t>(cur - prev);
      prev = cur;
    }
    const double rho =
        omega_N_prime(static_cast<double>(x), static_cast<double>(N));
    out.sum_local += big_theta_local(g, rho);
    x += m;
  }
  out.global = energy_breakdown(f, Ni).total;
  out.slack = out.global - out.sum_local;
  return out;
}

// ---------------------------------------------------------------------------
// evaluate_candidate
// ---------------------------------------------------------------------------

CandidateReport evaluate_candidate(const StepFunction& f, double d_hat) {
  if (!f.is_valid())
    throw std::invalid_argument("evaluate_candidate: invalid profile");
  const std::int64_t N = area(f);
  if (N == 0) throw std::invalid_argument("evaluate_candidate: empty shape");

  CandidateReport r;
  r.N = N;
  r.log_dim = log_dim_from_hooks(f);
  const long double half_log_fact =
      0.5L * lgammal(static_cast<long double>(N) + 1.0L);
  r.normalized = static_cast<double>(
      (half_log_fact - static_cast<long double>(r.log_dim)) /
      std::sqrt(static_cast<long double>(N)));
  r.gap = r.normalized - d_hat;
  return r;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string to_json(const BuildReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"N_target\":%lld,\"window_size\":%d,\"area\":%lld,"
                "\"log_dim\":%.17g,\"breakdown\":",
                static_cast<long long>(r.N_target), r.window_size,
                static_cast<long long>(area(r.f)), r.log_dim);
  std::string out = buf;
  out += to_json(r.breakdown);
  out += ",\"windows\":[";
  for (std::size_t i = 0; i < r.windows.size(); ++i) {
    const WindowReport& w = r.windows[i];
    std::snprintf(buf, sizeof buf,
                  "%s{\"x_start\":%lld,\"length\":%d,\"rho\":%.17g,"
                  "\"local_total\":%.17g}",
                  i ? "," : "", static_cast<long long>(w.x_start), w.length,
                  w.rho, w.local_total);
    out += buf;
  }
  out += "],\"f\":\"";
  out += r.f.to_string();
  out += "\"}";
  return out;
}

std::string to_json(const CandidateReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"N\":%lld,\"log_dim\":%.17g,\"normalized\":%.17g,"
                "\"gap\":%.17g}",
                static_cast<long long>(r.N), r.log_dim, r.normalized, r.gap);
  return buf;
}

}  // namespace maxrep
