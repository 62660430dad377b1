#include "maxrep/local_energy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

#include "maxrep/phi.hpp"

namespace maxrep {

LocalPath::LocalPath(std::vector<std::int8_t> s) : steps(std::move(s)) {
  for (auto v : steps) {
    if (v != 1 && v != -1) throw std::invalid_argument("LocalPath: steps must be +-1");
  }
}

LocalPath LocalPath::parse(std::string_view text) {
  std::vector<std::int8_t> s;
  s.reserve(text.size());
  for (char ch : text) {
    if (ch == '+') {
      s.push_back(1);
    } else if (ch == '-') {
      s.push_back(-1);
    } else {
      throw std::invalid_argument("LocalPath: expected only '+'/'-'");
    }
  }
  return LocalPath(std::move(s));
}

std::vector<std::int64_t> LocalPath::heights() const {
  std::vector<std::int64_t> h(steps.size() + 1, 0);
  for (std::size_t i = 0; i < steps.size(); ++i) h[i + 1] = h[i] + steps[i];
  return h;
}

std::string LocalPath::to_string() const {
  std::string out;
  out.reserve(steps.size());
  for (auto v : steps) out.push_back(v > 0 ? '+' : '-');
  return out;
}

namespace {

// \int_{w1}^{w2} (b0 + b1 w + b2 w^2 + b3 w^3) / (c + w)^m dw for m in {0,1,2}.
// Uses the substitution t = c + w; the 1/t and log terms only arise with a
// nonzero coefficient when t1 > 0, so t1 == 0 (adjacent pair touching the
// corner) is safe: those coefficients vanish identically there.
long double poly_over_pow(long double c, const long double b[4], int m, long double w1,
                          long double w2) {
  const long double dw = w2 - w1;
  if (m == 0) {
    const long double s1 = w1 + w2;
    const long double p2 = dw * s1 / 2.0L;
    const long double p3 = dw * (w1 * w1 + w1 * w2 + w2 * w2) / 3.0L;
    const long double p4 = dw * s1 * (w1 * w1 + w2 * w2) / 4.0L;
    return b[0] * dw + b[1] * p2 + b[2] * p3 + b[3] * p4;
  }
  const long double t1 = c + w1;
  const long double t2 = c + w2;
  const long double q3 = b[3];
  const long double q2 = b[2] - 3.0L * b[3] * c;
  const long double q1 = b[1] + c * (-2.0L * b[2] + 3.0L * b[3] * c);
  const long double q0 = b[0] + c * (-b[1] + c * (b[2] - b[3] * c));
  const long double p1 = dw;
  const long double p2 = dw * (t1 + t2) / 2.0L;
  long double lg = 0.0L;
  if (t1 > 0.0L) {
    lg = std::log1p(dw / t1);
  }
  if (m == 1) {
    const long double p3 = dw * (t1 * t1 + t1 * t2 + t2 * t2) / 3.0L;
    long double r = q1 * p1 + q2 * p2 + q3 * p3;
    if (q0 != 0.0L) {
      assert(t1 > 0.0L);
      r += q0 * lg;
    }
    return r;
  }
  // m == 2
  long double r = q2 * p1 + q3 * p2;
  if (q1 != 0.0L) {
    assert(t1 > 0.0L);
    r += q1 * lg;
  }
  if (q0 != 0.0L) {
    assert(t1 > 0.0L);
    r += q0 * dw / (t1 * t2);
  }
  return r;
}

// One w-segment of the pair integral: [x1, x2] must lie inside a single
// section-moment regime (w <= 1 or w >= 1).
long double segment_energy(long double c, long double a, int p, int q, long double rho,
                           bool left_segment, long double x1, long double x2) {
  const long double pq = static_cast<long double>(p) * q;
  const long double ps = static_cast<long double>(p) + q;
  long double b2[4], b1[4], b0[4];
  if (left_segment) {
    b2[0] = 0.0L;
    b2[1] = a * a;
    b2[2] = a * ps;
    b2[3] = 2.0L / 3.0L + pq / 3.0L;
    b1[0] = 0.0L;
    b1[1] = a;
    b1[2] = ps / 2.0L;
    b1[3] = 0.0L;
    b0[0] = 0.0L;
    b0[1] = 1.0L;
    b0[2] = 0.0L;
    b0[3] = 0.0L;
  } else {
    b2[0] = 2.0L * a * a + 4.0L / 3.0L - (4.0L / 3.0L) * pq;
    b2[1] = -a * a - 2.0L + 2.0L * a * ps + 2.0L * pq;
    b2[2] = 2.0L - a * ps;
    b2[3] = -2.0L / 3.0L - pq / 3.0L;
    b1[0] = 2.0L * a;
    b1[1] = -a + ps;
    b1[2] = -ps / 2.0L;
    b1[3] = 0.0L;
    b0[0] = 2.0L;
    b0[1] = -1.0L;
    b0[2] = 0.0L;
    b0[3] = 0.0L;
  }
  return poly_over_pow(c, b2, 2, x1, x2) - 2.0L * rho * poly_over_pow(c, b1, 1, x1, x2) +
         rho * rho * poly_over_pow(c, b0, 0, x1, x2);
}

long double pair_energy_ld(std::int64_t c, std::int64_t a, int p, int q, long double rho,
                           long double wlo, long double whi) {
  wlo = std::max(wlo, 0.0L);
  whi = std::min(whi, 2.0L);
  if (whi <= wlo) return 0.0L;
  // Perfectly aligned pair at rho = +-1: the integrand vanishes identically;
  // returning exact 0 keeps sigma_n^{+-1} = 0 and superadditivity exact in
  // floating point instead of accumulating +-1e-19 cancellation noise.
  if ((rho == 1.0L || rho == -1.0L) && p == q && static_cast<long double>(p) == rho &&
      a == c * p)
    return 0.0L;
  const long double cl = static_cast<long double>(c);
  const long double al = static_cast<long double>(a);
  long double e = 0.0L;
  if (wlo < 1.0L) e += segment_energy(cl, al, p, q, rho, true, wlo, std::min(whi, 1.0L));
  if (whi > 1.0L) e += segment_energy(cl, al, p, q, rho, false, std::max(wlo, 1.0L), whi);
  return e;
}

int check_slope(int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("pair_energy: slopes must be +-1");
  return s;
}

}  // namespace

double pair_energy_clipped(std::int64_t c, std::int64_t a, int p, int q, double rho,
                           double wlo, double whi) {
  if (c < 0) throw std::invalid_argument("pair_energy: need c >= 0");
  if (c == 0 && a != 0) throw std::invalid_argument("pair_energy: adjacent pair needs a = 0");
  check_slope(p);
  check_slope(q);
  return static_cast<double>(pair_energy_ld(c, a, p, q, rho, wlo, whi));
}

double pair_energy(std::int64_t c, std::int64_t a, int p, int q, double rho) {
  return pair_energy_clipped(c, a, p, q, rho, 0.0, 2.0);
}

namespace {
void check_rho(double rho) {
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error("theta_local: |rho| <= 1 required");
}

// The energy-preserving bijection between slope rho and slope -rho: read the
// steps backwards and negate them (plain negation alone would turn trapped
// up-down pairs into untrapped down-up ones and change tilde).
LocalPath reverse_negate(const LocalPath& f) {
  std::vector<std::int8_t> s(f.steps.rbegin(), f.steps.rend());
  for (auto& v : s) v = static_cast<std::int8_t>(-v);
  return LocalPath(std::move(s));
}
}  // namespace

double theta_local(const LocalPath& f, double rho) {
  check_rho(rho);
  // Delegate rho < 0 through the bijection so the rho <-> -rho symmetry is
  // exact in floating point, not just up to summation order.
  if (rho < 0.0) return theta_local(reverse_negate(f), -rho);
  const int n = f.n();
  const auto h = f.heights();
  const long double rl = rho;
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) {
    const long double d = static_cast<long double>(f.steps[i]) - rl;
    acc += d * d;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      acc += 2.0L * pair_energy_ld(j - i - 1, h[j] - h[i + 1], f.steps[i], f.steps[j], rl,
                                   0.0L, 2.0L);
    }
  }
  if (acc < 0.0L) acc = 0.0L;  // the integrand is a square; noise-only negatives
  return static_cast<double>(acc);
}

double tilde_local(const LocalPath& f) {
  const int n = f.n();
  phi_reserve(n);
  // Group trapped pairs by gap and sum in ascending gap order: the result is
  // then a function of the gap multiset alone, hence bitwise invariant under
  // the reverse-negate bijection.
  std::vector<std::int64_t> count(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    if (f.steps[i] != 1) continue;
    for (int j = i + 1; j < n; ++j) {
      if (f.steps[j] == -1) ++count[static_cast<std::size_t>(j - i)];
    }
  }
  long double acc = 0.0L;
  for (int g = 1; g <= n; ++g) {
    if (count[static_cast<std::size_t>(g)] > 0)
      acc += static_cast<long double>(count[static_cast<std::size_t>(g)]) * phi_hook(g);
  }
  return static_cast<double>(acc);
}

double big_theta_local(const LocalPath& f, double rho) {
  return theta_local(f, rho) / 8.0 + tilde_local(f);
}

double DyadicDecomposition::total() const {
  long double acc = diagonal;
  for (const auto& [k, v] : bands) acc += v;
  return static_cast<double>(acc);
}

DyadicDecomposition dyadic_energy(const LocalPath& f, double rho) {
  check_rho(rho);
  if (rho < 0.0) return dyadic_energy(reverse_negate(f), -rho);
  const int n = f.n();
  const auto h = f.heights();
  const long double rl = rho;
  DyadicDecomposition out;
  long double diag = 0.0L;
  std::map<int, long double> bands;
  for (int i = 0; i < n; ++i) {
    const long double d = static_cast<long double>(f.steps[i]) - rl;
    diag += d * d;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t c = j - i - 1;
      const std::int64_t a = h[j] - h[i + 1];
      // Distances within this pair span [c, c+2]; split across the diagonal
      // band [0, 1] and shells (2^k, 2^{k+1}].
      if (c < 1) {
        diag += 2.0L * pair_energy_ld(c, a, f.steps[i], f.steps[j], rl, 0.0L,
                                      1.0L - static_cast<long double>(c));
      }
      for (int k = 0; (1LL << k) < c + 2; ++k) {
        const long double lo = static_cast<long double>((1LL << k) - c);
        const long double hi = static_cast<long double>((2LL << k) - c);
        if (hi <= 0.0L) continue;
        const long double v =
            2.0L * pair_energy_ld(c, a, f.steps[i], f.steps[j], rl, lo, hi);
        if (v != 0.0L) bands[k] += v;
      }
    }
  }
  out.diagonal = static_cast<double>(diag);
  for (const auto& [k, v] : bands) out.bands.emplace_back(k, static_cast<double>(v));
  return out;
}

double theta_local_band(const LocalPath& f, double rho, int k) {
  check_rho(rho);
  if (k < 0) throw std::invalid_argument("theta_local_band: k must be >= 0");
  if (rho < 0.0) return theta_local_band(reverse_negate(f), -rho, k);
  const int n = f.n();
  const auto h = f.heights();
  const long double rl = rho;
  long double acc = 0.0L;
  const std::int64_t lo_d = 1LL << k;
  const std::int64_t hi_d = 2LL << k;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t c = j - i - 1;
      if (c >= hi_d || c + 2 <= lo_d) continue;
      acc += 2.0L * pair_energy_ld(j - i - 1, h[j] - h[i + 1], f.steps[i], f.steps[j], rl,
                                   static_cast<long double>(lo_d - c),
                                   static_cast<long double>(hi_d - c));
    }
  }
  return static_cast<double>(acc);
}

}  // namespace maxrep
