#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maxrep {

/// A finite lattice path on [0, n]: f(0) = 0 and slope +-1 on each unit cell.
/// Text form: one '+' or '-' per step, e.g. "-+-+".
struct LocalPath {
  std::vector<std::int8_t> steps;

  LocalPath() = default;
  explicit LocalPath(std::vector<std::int8_t> s);
  static LocalPath parse(std::string_view text);

  int n() const { return static_cast<int>(steps.size()); }
  /// Heights f(0), ..., f(n).
  std::vector<std::int64_t> heights() const;
  std::string to_string() const;
};

/// Exact value of the pair integral
///   \int\int ((f(y)-f(x))/(y-x) - rho)^2 dx dy
/// over x in cell i, y in cell j (i < j), restricted to the gap band
/// wlo <= (y - x) - c <= whi where c = j - i - 1.  Inputs: a = f(j) - f(i+1)
/// (always 0 for adjacent cells), p and q the slopes on the two cells.
/// The unrestricted cell pair corresponds to [wlo, whi] = [0, 2].
double pair_energy_clipped(std::int64_t c, std::int64_t a, int p, int q, double rho,
                           double wlo, double whi);
double pair_energy(std::int64_t c, std::int64_t a, int p, int q, double rho);

/// theta_n^rho(f) = \int_0^n \int_0^n ((f(x)-f(y))/(x-y) - rho)^2 dx dy,
/// evaluated in closed form (exact up to roundoff).
double theta_local(const LocalPath& f, double rho);

/// Hook weight sum_{i<j: s_i=+1, s_j=-1} phi(j - i).
double tilde_local(const LocalPath& f);

/// Theta_n^rho(f) = theta_n^rho(f) / 8 + tilde(f).
double big_theta_local(const LocalPath& f, double rho);

/// Split of theta into the diagonal band |x-y| <= 1 and dyadic shells
/// 2^k < |x-y| <= 2^{k+1}; diagonal + sum of bands reproduces theta.
struct DyadicDecomposition {
  double diagonal = 0.0;
  std::vector<std::pair<int, double>> bands;
  double total() const;
};

DyadicDecomposition dyadic_energy(const LocalPath& f, double rho);

/// Single shell 2^k < |x-y| <= 2^{k+1} of theta_local.
double theta_local_band(const LocalPath& f, double rho, int k);

}  // namespace maxrep
