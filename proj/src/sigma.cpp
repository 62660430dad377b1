#include "maxrep/sigma.hpp"

#include <omp.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "maxrep/partition.hpp"  // resource_limit_error
#include "maxrep/path_ops.hpp"
#include "maxrep/phi.hpp"

namespace maxrep {

namespace {

// Dense closed-form pair energies for one rho: E(c, a, p, q) with
// 0 <= c <= n-2, |a| <= c, a = c (mod 2).
struct PairTable {
  int n = 0;
  std::vector<double> e;

  PairTable(int n_, double rho) : n(n_) {
    if (n < 2) return;
    e.assign(static_cast<std::size_t>(n - 1) * (2 * n + 1) * 4, 0.0);
    for (int c = 0; c <= n - 2; ++c) {
      for (std::int64_t a = -c; a <= c; a += 2) {
        for (int pi = 0; pi < 2; ++pi) {
          for (int qi = 0; qi < 2; ++qi) {
            e[idx(c, a, pi, qi)] =
                pair_energy(c, a, pi ? 1 : -1, qi ? 1 : -1, rho);
          }
        }
      }
    }
  }

  std::size_t idx(int c, std::int64_t a, int pi, int qi) const {
    return (static_cast<std::size_t>(c) * (2 * n + 1) +
            static_cast<std::size_t>(a + n)) *
               4 +
           static_cast<std::size_t>(pi) * 2 + static_cast<std::size_t>(qi);
  }

  double get(int c, std::int64_t a, std::int8_t p, std::int8_t q) const {
    return e[idx(c, a, p > 0 ? 1 : 0, q > 0 ? 1 : 0)];
  }
};

void atomic_min(std::atomic<std::uint64_t>* a, double v) {
  std::uint64_t cur = a->load(std::memory_order_relaxed);
  while (std::bit_cast<double>(cur) > v) {
    if (a->compare_exchange_weak(cur, std::bit_cast<std::uint64_t>(v),
                                 std::memory_order_relaxed))
      break;
  }
}

// Branch-and-bound over step prefixes for rho >= 0 ('+' explored first, so
// the first strict minimum found is the lexicographically smallest).
struct BnB {
  int n;
  double rho;
  const PairTable& tab;
  const std::vector<double>& suffix;  // suffix[r] = sigma_r, r < n
  const std::vector<double>& phiv;    // phiv[g] = phi(g)
  std::atomic<std::uint64_t>* shared; // global incumbent (pruning only)
  static constexpr double kMargin = 1e-12;
  // Incremental leaf totals drift from the canonical big_theta_local value by
  // at most a few ulps of the running sums; this window decides which leaves
  // get the exact re-evaluation.
  static constexpr double kLeafScreen = 5e-14;

  std::vector<std::int8_t> steps;
  std::vector<std::int64_t> h;
  std::vector<long double> theta_at, tilde_at;
  double prune_val;  // initial upper bound (staircase)
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int8_t> best_steps;

  BnB(int n_, double rho_, const PairTable& t, const std::vector<double>& suf,
      const std::vector<double>& ph, double prune0, std::atomic<std::uint64_t>* sh)
      : n(n_), rho(rho_), tab(t), suffix(suf), phiv(ph), shared(sh),
        steps(static_cast<std::size_t>(n_)), h(static_cast<std::size_t>(n_) + 1, 0),
        theta_at(static_cast<std::size_t>(n_) + 1, 0.0L),
        tilde_at(static_cast<std::size_t>(n_) + 1, 0.0L), prune_val(prune0) {}

  double incumbent() const {
    double v = std::min(prune_val, best);
    if (shared) v = std::min(v, std::bit_cast<double>(shared->load(std::memory_order_relaxed)));
    return v;
  }

  // Try to extend the prefix of length k with step s; returns false if the
  // resulting lower bound prunes the subtree.
  bool push(int k, std::int8_t s) {
    const double d = static_cast<double>(s) - rho;
    long double dtheta = d * d;
    long double dtilde = 0.0L;
    for (int i = 0; i < k; ++i) {
      dtheta += 2.0L * tab.get(k - 1 - i, h[k] - h[i + 1], steps[i], s);
    }
    if (s == -1) {
      for (int i = 0; i < k; ++i) {
        if (steps[i] == 1) dtilde += phiv[static_cast<std::size_t>(k - i)];
      }
    }
    theta_at[k + 1] = theta_at[k] + dtheta;
    tilde_at[k + 1] = tilde_at[k] + dtilde;
    const double lb = static_cast<double>(theta_at[k + 1] / 8.0L + tilde_at[k + 1]) +
                      suffix[static_cast<std::size_t>(n - k - 1)];
    if (lb > incumbent() + kMargin) return false;
    steps[k] = s;
    h[k + 1] = h[k] + s;
    return true;
  }

  void dfs(int k) {
    if (k == n) {
      const double incr = static_cast<double>(theta_at[n] / 8.0L + tilde_at[n]);
      if (incr > incumbent() + kLeafScreen) return;
      // Canonical re-evaluation so recorded minima use exactly the arithmetic
      // of big_theta_local; DFS visits leaves in lexicographic order ('+'
      // first), so a strict compare keeps the lex-smallest minimizer.
      const double canon = big_theta_local(LocalPath(std::vector<std::int8_t>(steps)), rho);
      if (canon < best) {
        best = canon;
        best_steps = steps;
        if (shared) atomic_min(shared, canon);
      }
      return;
    }
    if (push(k, 1)) dfs(k + 1);
    if (push(k, -1)) dfs(k + 1);
  }

  // Replays a fixed prefix (mask bits, MSB-first, 0 = '+'); returns false if
  // pruned along the way.
  bool replay_prefix(std::uint64_t mask, int d) {
    for (int t = 0; t < d; ++t) {
      const std::int8_t s = ((mask >> (d - 1 - t)) & 1) ? -1 : 1;
      if (!push(t, s)) return false;
    }
    return true;
  }
};

// One exact sigma_n for rho >= 0, given the suffix table for all r < n.
SigmaRecord sigma_exact_one(int n, double rho, const PairTable& tab,
                            const std::vector<double>& suffix,
                            const std::vector<double>& phiv) {
  const LocalPath stair = staircase_path(n, rho);
  const double stair_val = big_theta_local(stair, rho);

  int depth = 0;
  if (n > 20 && omp_get_max_threads() > 1) depth = std::min(8, n - 12);
  const std::uint64_t tasks = 1ULL << depth;

  std::atomic<std::uint64_t> shared{std::bit_cast<std::uint64_t>(stair_val)};
  std::vector<double> task_val(tasks, std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::int8_t>> task_steps(tasks);

#pragma omp parallel for schedule(dynamic, 1) if (depth > 0)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(tasks); ++m) {
    BnB bb(n, rho, tab, suffix, phiv, stair_val, &shared);
    if (bb.replay_prefix(static_cast<std::uint64_t>(m), depth)) {
      bb.dfs(depth);
      task_val[static_cast<std::size_t>(m)] = bb.best;
      task_steps[static_cast<std::size_t>(m)] = std::move(bb.best_steps);
    }
  }

  // Serial reduction. Task values are already canonical, and task order is
  // the lexicographic order of prefixes, so a strict compare keeps the
  // lexicographically smallest minimizer overall.
  double best_canon = std::numeric_limits<double>::infinity();
  LocalPath witness;
  for (std::uint64_t m = 0; m < tasks; ++m) {
    if (task_val[m] < best_canon) {
      best_canon = task_val[m];
      witness = LocalPath(std::vector<std::int8_t>(task_steps[m]));
    }
  }
  if (!std::isfinite(best_canon)) {  // unreachable: the optimum's task survives
    best_canon = stair_val;
    witness = stair;
  }
  SigmaRecord rec;
  rec.n = n;
  rec.rho = rho;
  rec.value = best_canon;
  rec.witness = std::move(witness);
  rec.kind = SigmaKind::exact;
  return rec;
}

// The tilde-preserving bijection between the rho and -rho problems: reverse
// the steps and negate them.  big_theta_local(reverse_negate(w), -rho) is
// bitwise equal to big_theta_local(w, rho) because theta_local delegates
// negative rho through this same map.
LocalPath reverse_negate(const LocalPath& p) {
  std::vector<std::int8_t> s(p.steps.rbegin(), p.steps.rend());
  for (auto& v : s) v = static_cast<std::int8_t>(-v);
  return LocalPath(std::move(s));
}

void check_sigma_args(int n, double rho, int ceiling) {
  if (n < 1) throw std::invalid_argument("sigma: n must be >= 1");
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error("sigma: |rho| <= 1 required");
  if (n > ceiling) throw resource_limit_error("sigma_exact: n exceeds exact ceiling");
}

}  // namespace

std::vector<SigmaRecord> sigma_exact_upto(int n, double rho, int ceiling) {
  check_sigma_args(n, rho, ceiling);
  const bool flip = rho < 0.0;
  const double r = flip ? -rho : rho;
  phi_reserve(n);
  std::vector<double> phiv(static_cast<std::size_t>(n) + 1, 0.0);
  for (int g = 1; g <= n; ++g) phiv[static_cast<std::size_t>(g)] = phi_hook(g);
  const PairTable tab(n, r);

  std::vector<SigmaRecord> out;
  std::vector<double> suffix{0.0};  // sigma_0 = 0
  for (int m = 1; m <= n; ++m) {
    SigmaRecord rec = sigma_exact_one(m, r, tab, suffix, phiv);
    suffix.push_back(rec.value);
    if (flip) {
      rec.rho = rho;
      rec.witness = reverse_negate(rec.witness);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

SigmaRecord sigma_exact(int n, double rho, int ceiling) {
  return sigma_exact_upto(n, rho, ceiling).back();
}

std::uint64_t sigma_default_budget(int n) {
  return 20000ULL + 300ULL * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
}

SigmaRecord sigma_heuristic(int n, double rho, std::uint64_t budget, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sigma: n must be >= 1");
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error("sigma: |rho| <= 1 required");
  if (budget == 0) budget = sigma_default_budget(n);

  phi_reserve(n);
  std::vector<double> phiv(static_cast<std::size_t>(n) + 1, 0.0);
  for (int g = 1; g <= n; ++g) phiv[static_cast<std::size_t>(g)] = phi_hook(g);
  const PairTable tab(n, rho);

  std::vector<std::int64_t> hbuf(static_cast<std::size_t>(n) + 1, 0);
  auto eval = [&](const std::vector<std::int8_t>& s) -> double {
    long double theta = 0.0L, tilde = 0.0L;
    std::vector<std::int64_t>& h = hbuf;
    for (int i = 0; i < n; ++i) h[i + 1] = h[i] + s[i];
    for (int i = 0; i < n; ++i) {
      const long double d = static_cast<long double>(s[i]) - rho;
      theta += d * d;
      for (int j = i + 1; j < n; ++j) {
        theta += 2.0L * tab.get(j - i - 1, h[j] - h[i + 1], s[i], s[j]);
        if (s[i] == 1 && s[j] == -1) tilde += phiv[static_cast<std::size_t>(j - i)];
      }
    }
    return static_cast<double>(theta / 8.0L + tilde);
  };

  std::vector<std::int8_t> cur = staircase_path(n, rho).steps;
  double cur_val = eval(cur);
  double best_val = cur_val;
  std::vector<std::int8_t> best = cur;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double t0 = 0.5 * std::max(0.05, 1.0 - std::fabs(rho));
  const double tmin = 1e-7;
  // Budget-independent cooling (calibrated to the default budget) keeps a
  // longer run a strict continuation of a shorter one for the same seed.
  const double decay =
      std::pow(tmin / t0, 1.0 / static_cast<double>(sigma_default_budget(n)));
  double temp = t0;

  for (std::uint64_t it = 0; it < budget; ++it) {
    const std::uint64_t r1 = rng();
    int i = static_cast<int>(r1 % static_cast<std::uint64_t>(n));
    int j = -1;
    if ((r1 >> 32) & 1) {
      // endpoint-preserving surgery: flip one up and one down step
      const std::uint64_t r2 = rng();
      for (int tries = 0; tries < 8; ++tries) {
        const int cand =
            static_cast<int>((r2 >> (8 * tries)) % static_cast<std::uint64_t>(n));
        if (cur[cand] != cur[i]) {
          j = cand;
          break;
        }
      }
    }
    cur[i] = static_cast<std::int8_t>(-cur[i]);
    if (j >= 0) cur[j] = static_cast<std::int8_t>(-cur[j]);
    const double cand_val = eval(cur);
    const double delta = cand_val - cur_val;
    const double u = unif(rng);
    if (delta <= 0.0 || u < std::exp(-delta / temp)) {
      cur_val = cand_val;
      if (cur_val < best_val) {
        best_val = cur_val;
        best = cur;
      }
    } else {
      cur[i] = static_cast<std::int8_t>(-cur[i]);
      if (j >= 0) cur[j] = static_cast<std::int8_t>(-cur[j]);
    }
    temp = std::max(temp * decay, tmin);
  }

  SigmaRecord rec;
  rec.n = n;
  rec.rho = rho;
  rec.witness = LocalPath(std::move(best));
  rec.value = big_theta_local(rec.witness, rho);
  rec.kind = SigmaKind::heuristic_upper;
  rec.seed = seed;
  return rec;
}

SigmaRecord sigma_heuristic_multi(int n, double rho, std::uint64_t budget,
                                  const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("sigma_heuristic_multi: no seeds");
  std::vector<SigmaRecord> recs(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(seeds.size()); ++k) {
    recs[static_cast<std::size_t>(k)] =
        sigma_heuristic(n, rho, budget, seeds[static_cast<std::size_t>(k)]);
  }
  std::size_t bi = 0;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    const bool better = recs[k].value < recs[bi].value - 1e-15 ||
                        (std::fabs(recs[k].value - recs[bi].value) <= 1e-15 &&
                         recs[k].seed < recs[bi].seed);
    if (better) bi = k;
  }
  return recs[bi];
}

}  // namespace maxrep
