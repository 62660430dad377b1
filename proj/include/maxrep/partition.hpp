#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace maxrep {

using BigInt = boost::multiprecision::cpp_int;

/// Enumeration ceiling: exact scans beyond this are a resource-limit error.
inline constexpr int kEnumerationCeiling = 120;

/// Thrown when a request exceeds a documented resource ceiling.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An integer partition: weakly decreasing positive parts.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p);

  int size() const;  // sum of parts
  int rows() const { return static_cast<int>(parts.size()); }
  int first() const { return parts.empty() ? 0 : parts.front(); }

  /// conjugate()[j] = number of parts >= j+1 (0-based columns).
  std::vector<int> conjugate() const;
  Partition conjugate_partition() const;

  /// "3,2,1"; empty partition is "".
  std::string to_string() const;
  /// Run-length form, e.g. (5,5,1,1,1) -> "5^2,1^3".
  std::string to_run_length() const;
  /// Accepts both plain ("3,2,1") and run-length ("5^2,1^3") forms.
  static Partition parse(const std::string& text);

  bool operator==(const Partition&) const = default;
};

/// True if a precedes b in the enumeration order (reverse-lexicographic:
/// (N) first, (1^N) last).
bool enumeration_order_before(const Partition& a, const Partition& b);

/// Hook lengths in row-major cell order; size == partition size.
std::vector<int> hook_lengths(const Partition& lambda);

BigInt factorial(int n);

/// Exact irreducible-representation dimension with an 80-bit log alongside.
struct BigDim {
  BigInt value;
  long double log_value;
};

BigDim dim_exact(const Partition& lambda);

/// log dim via lgammal only (no big-integer work).
long double log_dim(const Partition& lambda);

/// p(n) by the bounded-part DP; exact for n <= kEnumerationCeiling.
std::uint64_t count_partitions(int n);

/// Streaming reverse-lexicographic generator over partitions of n with parts
/// <= max_part.  parts()/count() expose the current partition in place.
class PartitionGenerator {
 public:
  PartitionGenerator(int n, int max_part = std::numeric_limits<int>::max());

  bool valid() const { return valid_; }
  bool next();  // advance; false once exhausted

  const int* parts() const { return x_.data(); }
  int count() const { return m_; }

 private:
  std::vector<int> x_;
  int n_;
  int m_ = 0;  // number of parts
  int h_ = 0;  // index of last part > 1 (meaningful when any part > 1)
  bool valid_ = false;
};

/// Visits every partition of n (parts <= max_part) in reverse-lexicographic
/// order.  visit returns false to stop early.  Returns number visited.
template <class Visitor>
std::uint64_t enumerate_partitions_max(int n, int max_part, Visitor&& visit) {
  if (n < 0) throw std::invalid_argument("enumerate_partitions: negative n");
  if (n > kEnumerationCeiling)
    throw resource_limit_error("enumerate_partitions: n exceeds ceiling " +
                               std::to_string(kEnumerationCeiling));
  std::uint64_t seen = 0;
  Partition lambda;
  for (PartitionGenerator gen(n, max_part); gen.valid(); gen.next()) {
    lambda.parts.assign(gen.parts(), gen.parts() + gen.count());
    ++seen;
    if (!visit(static_cast<const Partition&>(lambda))) break;
  }
  return seen;
}

template <class Visitor>
std::uint64_t enumerate_partitions(int n, Visitor&& visit) {
  return enumerate_partitions_max(n, std::numeric_limits<int>::max(),
                                  std::forward<Visitor>(visit));
}

}  // namespace maxrep
