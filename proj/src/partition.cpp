#include "maxrep/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace maxrep {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0)
      throw std::invalid_argument("Partition: parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1])
      throw std::invalid_argument("Partition: parts must be weakly decreasing");
  }
}

int Partition::size() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

std::vector<int> Partition::conjugate() const {
  std::vector<int> conj(first(), 0);
  for (int p : parts)
    for (int j = 0; j < p; ++j) ++conj[j];
  return conj;
}

Partition Partition::conjugate_partition() const {
  return Partition(conjugate());
}

std::string Partition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts[i]);
  }
  return out;
}

std::string Partition::to_run_length() const {
  std::string out;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(parts[i]);
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

Partition Partition::parse(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("Partition::parse: empty part");
    auto caret = tok.find('^');
    long mult = 1;
    std::string head = tok;
    if (caret != std::string::npos) {
      head = tok.substr(0, caret);
      mult = std::stol(tok.substr(caret + 1));
      if (mult <= 0) throw std::invalid_argument("Partition::parse: bad multiplicity");
    }
    long v = std::stol(head);
    if (v <= 0) throw std::invalid_argument("Partition::parse: parts must be positive");
    for (long k = 0; k < mult; ++k) parts.push_back(static_cast<int>(v));
  }
  return Partition(std::move(parts));
}

bool enumeration_order_before(const Partition& a, const Partition& b) {
  // Reverse-lexicographic: larger-first comparison.
  return std::lexicographical_compare(b.parts.begin(), b.parts.end(),
                                      a.parts.begin(), a.parts.end());
}

std::vector<int> hook_lengths(const Partition& lambda) {
  std::vector<int> conj = lambda.conjugate();
  std::vector<int> hooks;
  hooks.reserve(lambda.size());
  for (int i = 0; i < lambda.rows(); ++i)
    for (int j = 0; j < lambda.parts[i]; ++j)
      hooks.push_back(lambda.parts[i] - j + conj[j] - i - 1);
  return hooks;
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

BigDim dim_exact(const Partition& lambda) {
  std::vector<int> hooks = hook_lengths(lambda);
  BigInt prod = 1;
  for (int h : hooks) prod *= h;
  BigInt dim = factorial(lambda.size()) / prod;
  long double lg = std::lgamma(static_cast<long double>(lambda.size()) + 1.0L);
  for (int h : hooks) lg -= std::log(static_cast<long double>(h));
  return BigDim{std::move(dim), lg};
}

long double log_dim(const Partition& lambda) {
  long double lg = std::lgamma(static_cast<long double>(lambda.size()) + 1.0L);
  for (int h : hook_lengths(lambda)) lg -= std::log(static_cast<long double>(h));
  return lg;
}

std::uint64_t count_partitions(int n) {
  if (n < 0) return 0;
  if (n > kEnumerationCeiling)
    throw resource_limit_error("count_partitions: n exceeds ceiling");
  // p(m, k) = partitions of m with parts <= k, rolled over k.
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (int k = 1; k <= n; ++k)
    for (int m = k; m <= n; ++m) row[m] += row[m - k];
  return row[n];
}

PartitionGenerator::PartitionGenerator(int n, int max_part) : n_(n) {
  if (n < 0) throw std::invalid_argument("PartitionGenerator: negative n");
  if (max_part < 1 && n > 0)
    throw std::invalid_argument("PartitionGenerator: max_part < 1");
  x_.assign(n > 0 ? n : 0, 1);
  if (n == 0) {  // single empty partition
    m_ = 0;
    valid_ = true;
    return;
  }
  // Greedy max-first fill gives the reverse-lex first partition.
  int rem = n, i = 0;
  while (rem > 0) {
    int p = std::min(rem, max_part);
    x_[i++] = p;
    rem -= p;
  }
  m_ = i;
  h_ = 0;
  for (int k = 0; k < m_; ++k)
    if (x_[k] > 1) h_ = k;
  valid_ = true;
}

bool PartitionGenerator::next() {
  if (!valid_) return false;
  if (n_ == 0 || x_[0] == 1) {  // (1^n) (or empty) is last
    valid_ = false;
    return false;
  }
  if (x_[h_] == 2) {
    x_[h_] = 1;
    ++m_;
    --h_;
    return true;
  }
  int r = x_[h_] - 1;
  int t = m_ - h_;  // units freed: old x_[h_] + ones tail minus new r
  x_[h_] = r;
  while (t >= r) {
    x_[++h_] = r;
    t -= r;
  }
  if (t == 0) {
    m_ = h_ + 1;
  } else {
    m_ = h_ + 2;
    if (t > 1) x_[++h_] = t;
    // t == 1: the slot already holds a 1 by the tail invariant
  }
  return true;
}

}  // namespace maxrep
