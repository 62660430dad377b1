#pragma once

// Independent reference implementations used only by tests.  Each oracle is
// deliberately naive and structurally unrelated to the library code it checks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "maxrep/partition.hpp"

namespace oracle {

/// p(n) via Euler's pentagonal-number recurrence (independent of the
/// bounded-part DP used by the library).
inline std::uint64_t pentagonal_count(int n) {
  static std::vector<std::uint64_t> memo{1};
  for (int m = static_cast<int>(memo.size()); m <= n; ++m) {
    std::int64_t acc = 0;
    for (int k = 1;; ++k) {
      std::int64_t g1 = static_cast<std::int64_t>(k) * (3 * k - 1) / 2;
      std::int64_t g2 = static_cast<std::int64_t>(k) * (3 * k + 1) / 2;
      if (g1 > m && g2 > m) break;
      std::int64_t sign = (k % 2 == 1) ? 1 : -1;
      if (g1 <= m) acc += sign * static_cast<std::int64_t>(memo[m - g1]);
      if (g2 <= m) acc += sign * static_cast<std::int64_t>(memo[m - g2]);
    }
    memo.push_back(static_cast<std::uint64_t>(acc));
  }
  return memo[n];
}

/// Number of standard Young tableaux of shape lambda by brute-force DFS over
/// cell fillings (usable up to ~n = 12).
inline std::uint64_t count_syt(const std::vector<int>& lambda) {
  int rows = static_cast<int>(lambda.size());
  std::vector<int> filled(rows, 0);  // cells filled so far in each row
  std::uint64_t count = 0;
  int n = 0;
  for (int p : lambda) n += p;
  // place entries 1..n; entry goes to any row whose next free cell is legal
  std::vector<int> stack;
  std::function<void(int)> place = [&](int entry) {
    if (entry > n) {
      ++count;
      return;
    }
    for (int r = 0; r < rows; ++r) {
      if (filled[r] >= lambda[r]) continue;
      if (r > 0 && filled[r - 1] <= filled[r]) continue;  // column order
      ++filled[r];
      place(entry + 1);
      --filled[r];
    }
  };
  place(1);
  return count;
}

/// Hook lengths by explicit cell-grid counting (arm and leg walked cell by
/// cell), sorted ascending.
inline std::vector<int> hooks_by_grid(const std::vector<int>& lambda) {
  int rows = static_cast<int>(lambda.size());
  int cols = rows ? lambda[0] : 0;
  std::vector<std::vector<bool>> cell(rows, std::vector<bool>(cols, false));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lambda[i]; ++j) cell[i][j] = true;
  std::vector<int> hooks;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lambda[i]; ++j) {
      int h = 1;
      for (int jj = j + 1; jj < cols && cell[i][jj]; ++jj) ++h;
      for (int ii = i + 1; ii < rows && cell[ii][j]; ++ii) ++h;
      hooks.push_back(h);
    }
  std::sort(hooks.begin(), hooks.end());
  return hooks;
}

/// All partitions of n in reverse-lexicographic order by simple recursion.
inline void partitions_recursive(int n, int max_part, std::vector<int>& cur,
                                 std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_recursive(n - p, p, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> all_partitions(int n,
                                                    int max_part = 1 << 30) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_recursive(n, max_part, cur, out);
  return out;
}

}  // namespace oracle
