#include "maxrep/phi.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace maxrep {

double phi_series(double x) {
  if (x < 1.0) throw std::domain_error("phi_series: argument must be >= 1");
  const long double inv2 = 1.0L / (static_cast<long double>(x) * x);
  long double sum = 0.0L;
  long double pw = inv2;  // x^{-2k}
  for (std::int64_t k = 1;; ++k) {
    const long double term = pw / (static_cast<long double>(k) * (k + 1) * (2 * k + 1));
    sum += term;
    if (term < 1e-18L * sum) break;
    pw *= inv2;
  }
  return static_cast<double>(sum);
}

namespace {
std::vector<double> g_phi_table;  // g_phi_table[h-1] = phi(h)
std::mutex g_phi_mutex;

void extend_locked(std::int64_t max_h) {
  for (std::int64_t h = static_cast<std::int64_t>(g_phi_table.size()) + 1; h <= max_h; ++h) {
    g_phi_table.push_back(h == 1 ? kPhiAtOne : phi_series(static_cast<double>(h)));
  }
}
}  // namespace

double phi_hook(std::int64_t h) {
  if (h < 1) throw std::domain_error("phi_hook: hook length must be >= 1");
  {
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    if (h > static_cast<std::int64_t>(g_phi_table.size())) extend_locked(h);
    return g_phi_table[static_cast<std::size_t>(h - 1)];
  }
}

void phi_reserve(std::int64_t max_h) {
  std::lock_guard<std::mutex> lock(g_phi_mutex);
  extend_locked(max_h);
}

}  // namespace maxrep
