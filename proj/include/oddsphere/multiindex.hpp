#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <vector>

#include "oddsphere/error.hpp"

namespace oddsphere {

/// A d-tuple of non-negative integers. Used for monomial exponents z^k and
/// as the label of the orthonormal basis vector e_k.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
  MultiIndex(std::initializer_list<int> entries) : entries_(entries) { check(); }
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) { check(); }

  static MultiIndex unit(std::size_t dim, std::size_t i) {
    MultiIndex e(dim);
    e.entries_.at(i) = 1;
    return e;
  }

  std::size_t dim() const noexcept { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  int degree() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

  MultiIndex operator+(const MultiIndex& o) const {
    require(dim() == o.dim(), "multi-index dimension mismatch");
    MultiIndex r(*this);
    for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] += o.entries_[i];
    return r;
  }

  /// Componentwise difference; false when some component would go negative.
  bool try_subtract(const MultiIndex& o, MultiIndex& out) const {
    require(dim() == o.dim(), "multi-index dimension mismatch");
    out = *this;
    for (std::size_t i = 0; i < dim(); ++i) {
      out.entries_[i] -= o.entries_[i];
      if (out.entries_[i] < 0) return false;
    }
    return true;
  }

  auto operator<=>(const MultiIndex&) const = default;

 private:
  void check() const {
    for (int e : entries_) require(e >= 0, "multi-index entries must be non-negative");
  }

  std::vector<int> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& k) {
  os << '[';
  for (std::size_t i = 0; i < k.dim(); ++i) os << (i ? "," : "") << k[i];
  return os << ']';
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact at each step
  return r;
}

/// Number of multi-indices in dimension d of degree <= max_degree.
inline std::uint64_t count_up_to_degree(int max_degree, std::size_t d) {
  if (max_degree < 0) return 0;
  return binomial(static_cast<std::uint64_t>(max_degree) + d, d);
}

/// Number of multi-indices in dimension d of degree exactly m.
inline std::uint64_t count_of_degree(int m, std::size_t d) {
  if (m < 0) return 0;
  if (d == 0) return m == 0 ? 1 : 0;
  return binomial(static_cast<std::uint64_t>(m) + d - 1, d - 1);
}

/// The fixed 1-based enumeration (e_j) of the monomial basis: graded by total
/// degree, lexicographically ascending within a degree. For d = 2 the order
/// starts (0,0), (0,1), (1,0), (0,2), (1,1), (2,0).
class Enumeration {
 public:
  explicit Enumeration(std::size_t d) : d_(d) { require(d >= 1, "dimension d must be >= 1"); }

  std::size_t dim() const noexcept { return d_; }

  std::uint64_t index_of(const MultiIndex& k) const {
    require(k.dim() == d_, "multi-index dimension does not match enumeration");
    int m = k.degree();
    std::uint64_t rank = 0;
    int rest = m;
    for (std::size_t i = 0; i + 1 < d_; ++i) {
      for (int v = 0; v < k[i]; ++v) rank += count_of_degree(rest - v, d_ - i - 1);
      rest -= k[i];
    }
    return count_up_to_degree(m - 1, d_) + rank + 1;
  }

  MultiIndex multi_of(std::uint64_t j) const {
    require(j >= 1, "basis index must be >= 1");
    int m = 0;
    while (count_up_to_degree(m, d_) < j) ++m;
    std::uint64_t rank = j - count_up_to_degree(m - 1, d_) - 1;
    MultiIndex k(d_);
    int rest = m;
    for (std::size_t i = 0; i + 1 < d_; ++i) {
      int v = 0;
      while (true) {
        std::uint64_t block = count_of_degree(rest - v, d_ - i - 1);
        if (rank < block) break;
        rank -= block;
        ++v;
      }
      k[i] = v;
      rest -= v;
    }
    k[d_ - 1] = rest;
    return k;
  }

  /// All multi-indices of degree <= max_degree, in enumeration order.
  std::vector<MultiIndex> up_to_degree(int max_degree) const {
    std::vector<MultiIndex> out;
    auto total = count_up_to_degree(max_degree, d_);
    out.reserve(total);
    for (int m = 0; m <= max_degree; ++m) append_degree(m, out);
    return out;
  }

  std::vector<MultiIndex> of_degree(int m) const {
    std::vector<MultiIndex> out;
    append_degree(m, out);
    return out;
  }

 private:
  void append_degree(int m, std::vector<MultiIndex>& out) const {
    MultiIndex k(d_);
    fill(k, 0, m, out);
  }

  void fill(MultiIndex& k, std::size_t pos, int rest, std::vector<MultiIndex>& out) const {
    if (pos + 1 == d_) {
      k[pos] = rest;
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      k[pos] = v;
      fill(k, pos + 1, rest - v, out);
    }
    k[pos] = 0;
  }

  std::size_t d_;
};

inline std::uint64_t index_of(const MultiIndex& k) { return Enumeration(k.dim()).index_of(k); }
inline MultiIndex multi_of(std::uint64_t j, std::size_t d) { return Enumeration(d).multi_of(j); }

}  // namespace oddsphere
