#include "maxrep/path_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "maxrep/phi.hpp"

namespace maxrep {

namespace {

// Exact tilde change from flipping step i of cur away from sign `from`.
double tilde_delta(const LocalPath& cur, int i, std::int8_t from) {
  const int n = cur.n();
  long double d = 0.0L;
  if (from == 1) {
    // '+' -> '-': pairs (i, j) stop being trapped, pairs (u, i) start.
    for (int j = i + 1; j < n; ++j)
      if (cur.steps[static_cast<std::size_t>(j)] == -1) d -= phi_hook(j - i);
    for (int u = 0; u < i; ++u)
      if (cur.steps[static_cast<std::size_t>(u)] == 1) d += phi_hook(i - u);
  } else {
    for (int u = 0; u < i; ++u)
      if (cur.steps[static_cast<std::size_t>(u)] == 1) d -= phi_hook(i - u);
    for (int j = i + 1; j < n; ++j)
      if (cur.steps[static_cast<std::size_t>(j)] == -1) d += phi_hook(j - i);
  }
  return static_cast<double>(d);
}

// Pair energy at slope 0 restricted to cells within a fixed radius of i.
// Distant pairs change nearly identically for every admissible flip site, so
// this window plus the exact tilde delta ranks candidate sites well.
double window_theta0(const LocalPath& f, int i) {
  constexpr int kRadius = 8;
  const int n = f.n();
  const auto h = f.heights();
  const int lo = std::max(0, i - kRadius);
  const int hi = std::min(n - 1, i + kRadius);
  long double acc = 0.0L;
  for (int u = lo; u <= hi; ++u) {
    for (int v = u + 1; v <= hi; ++v) {
      acc += 2.0L * pair_energy(v - u - 1,
                                h[static_cast<std::size_t>(v)] -
                                    h[static_cast<std::size_t>(u + 1)],
                                f.steps[static_cast<std::size_t>(u)],
                                f.steps[static_cast<std::size_t>(v)], 0.0);
    }
  }
  return static_cast<double>(acc);
}

// Slope-free cost estimate for one flip at i: exact tilde change plus the
// short-range theta change at slope 0.
double flip_cost(const LocalPath& cur, int i, std::int8_t from) {
  LocalPath trial = cur;
  trial.steps[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-from);
  return tilde_delta(cur, i, from) + (window_theta0(trial, i) - window_theta0(cur, i)) / 8.0;
}

}  // namespace

LocalPath staircase_path(int n, double rho) {
  if (n < 0) throw std::invalid_argument("staircase_path: n must be >= 0");
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error("staircase_path: |rho| <= 1 required");
  const bool flip = rho < 0.0;
  const double r = flip ? -rho : rho;
  std::vector<std::int8_t> s(static_cast<std::size_t>(n));
  std::int64_t h = 0;
  for (int i = 0; i < n; ++i) {
    // Tolerance keeps exact-rational grid points (e.g. rho = 1/4, x = 4) on
    // the "touch the line" branch despite binary rounding.
    if (static_cast<double>(h) + 1.0 <= r * (i + 1) + 1e-12) {
      s[i] = 1;
      ++h;
    } else {
      s[i] = -1;
      --h;
    }
  }
  if (flip)
    for (auto& v : s) v = static_cast<std::int8_t>(-v);
  return LocalPath(std::move(s));
}

LocalPath adjust_endpoint(const LocalPath& p, std::int64_t a) {
  const int n = p.n();
  const std::int64_t end = p.heights().back();
  if (((a - end) & 1) != 0)
    throw construction_error("adjust_endpoint: target parity differs from p(n)");
  if (a == end) return p;
  const std::int64_t s = std::llabs(a - end) / 2;
  const std::int8_t from = (a > end) ? -1 : 1;  // raise flips '-', lower flips '+'
  const double min_gap = static_cast<double>(n) / (10.0 * static_cast<double>(s));
  const int lo = (n + 2) / 3;       // ceil(n/3)
  const int hi = (2 * n) / 3;       // floor(2n/3)
  LocalPath q = p;
  std::vector<int> placed;

  auto spaced_from_placed = [&](int i) {
    for (int f : placed)
      if (std::fabs(static_cast<double>(i - f)) < min_gap) return false;
    return true;
  };
  // Greedy left-to-right count of additional flips placeable, optionally with
  // site `extra` already taken; leftmost-first maximizes the count.
  auto remaining_capacity = [&](int extra) {
    int count = 0;
    double last = -1e18;
    for (int i = lo; i < hi; ++i) {
      if (i == extra || q.steps[static_cast<std::size_t>(i)] != from) continue;
      if (!spaced_from_placed(i)) continue;
      if (extra >= 0 && std::fabs(static_cast<double>(i - extra)) < min_gap) continue;
      if (static_cast<double>(i) - last < min_gap) continue;
      last = static_cast<double>(i);
      ++count;
    }
    return count;
  };

  if (remaining_capacity(-1) < s)
    throw construction_error("adjust_endpoint: middle third lacks spaced flippable steps");
  for (std::int64_t k = 0; k < s; ++k) {
    int best_i = -1;
    double best_cost = 0.0;
    for (int i = lo; i < hi; ++i) {
      if (q.steps[static_cast<std::size_t>(i)] != from || !spaced_from_placed(i)) continue;
      if (remaining_capacity(i) < s - k - 1) continue;  // keep the rest placeable
      const double cost = flip_cost(q, i, from);
      if (best_i < 0 || cost < best_cost) {
        best_i = i;
        best_cost = cost;
      }
    }
    if (best_i < 0)
      throw construction_error("adjust_endpoint: middle third lacks spaced flippable steps");
    q.steps[static_cast<std::size_t>(best_i)] = static_cast<std::int8_t>(-from);
    placed.push_back(best_i);
  }
  return q;
}

LocalPath concatenate(const LocalPath& g, int ell, double rho) {
  const int m = g.n();
  if (m == 0 || ell <= 0) throw std::invalid_argument("concatenate: need m, ell >= 1");
  const std::int64_t gm = g.heights().back();
  if (std::fabs(static_cast<double>(gm) - rho * m) > 10.0)
    throw construction_error("concatenate: block endpoint too far from rho*m");
  // Parity-corrected floor of rho*m.
  std::int64_t t0 = static_cast<std::int64_t>(std::floor(rho * m));
  if (((t0 - m) & 1) != 0) t0 += 1;
  std::vector<std::int8_t> steps;
  steps.reserve(static_cast<std::size_t>(m) * ell);
  std::int64_t endpoint = 0;
  for (int blk = 1; blk <= ell; ++blk) {
    // Among targets keeping the boundary invariant, prefer the least surgery
    // (fewest flipped steps), then the smaller residual drift.
    std::int64_t best_a = 0;
    double best_drift = 1e18;
    double best_surgery = 1e18;
    for (std::int64_t a : {t0 - 2, t0, t0 + 2}) {
      const double drift =
          std::fabs(static_cast<double>(endpoint + a) - rho * static_cast<double>(blk) * m);
      if (drift > 2.0 + 1e-9) continue;
      const double surgery = std::fabs(static_cast<double>(a - gm));
      if (surgery < best_surgery - 1e-12 ||
          (surgery < best_surgery + 1e-12 && drift < best_drift - 1e-12)) {
        best_drift = drift;
        best_surgery = surgery;
        best_a = a;
      }
    }
    if (best_drift > 2.0 + 1e-9)
      throw construction_error("concatenate: no block target keeps |f(im) - rho im| <= 2");
    const LocalPath block = adjust_endpoint(g, best_a);
    steps.insert(steps.end(), block.steps.begin(), block.steps.end());
    endpoint += best_a;
  }
  return LocalPath(std::move(steps));
}

FlatnessProfile flatness_profile(const LocalPath& p, double rho) {
  FlatnessProfile out;
  const auto h = p.heights();
  out.deviations.resize(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double dev = std::fabs(static_cast<double>(h[k]) - rho * static_cast<double>(k));
    out.deviations[k] = dev;
    if (dev > out.max_dev) {
      out.max_dev = dev;
      out.argmax = static_cast<int>(k);
    }
  }
  return out;
}

}  // namespace maxrep
