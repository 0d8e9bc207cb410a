#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace hme {

// Multi-index alpha over up to three velocity dimensions. Entries beyond
// dim() stay zero, so comparisons and hashing can treat storage uniformly.
class MultiIndex {
public:
  static constexpr int max_dim = 3;

  explicit MultiIndex(int dim) : dim_(dim) {
    if (dim < 1 || dim > max_dim)
      throw std::invalid_argument("MultiIndex: dimension must be 1, 2 or 3");
  }

  MultiIndex(std::initializer_list<int> entries)
      : dim_(static_cast<int>(entries.size())) {
    if (dim_ < 1 || dim_ > max_dim)
      throw std::invalid_argument("MultiIndex: dimension must be 1, 2 or 3");
    int d = 0;
    for (int v : entries) e_[d++] = v;
  }

  static MultiIndex zero(int dim) { return MultiIndex(dim); }

  // Unit index e_d (zero-based direction).
  static MultiIndex unit(int dim, int d) {
    MultiIndex r(dim);
    r.e_[check_dir(dim, d)] = 1;
    return r;
  }

  int dim() const { return dim_; }
  int operator[](int d) const { return e_[d]; }
  int& operator[](int d) { return e_[d]; }

  int degree() const { return e_[0] + e_[1] + e_[2]; }
  bool nonnegative() const { return e_[0] >= 0 && e_[1] >= 0 && e_[2] >= 0; }

  // alpha +/- delta * e_d; the result may have negative entries, which
  // callers treat as an absent slot.
  MultiIndex shifted(int d, int delta) const {
    MultiIndex r = *this;
    r.e_[check_dir(dim_, d)] += delta;
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.dim_ == b.dim_ && a.e_ == b.e_;
  }

  // Comma-separated entries, e.g. "2,0,1"; used as state-file keys.
  std::string str() const {
    std::string s;
    for (int d = 0; d < dim_; ++d) {
      if (d) s += ',';
      s += std::to_string(e_[d]);
    }
    return s;
  }

private:
  static int check_dir(int dim, int d) {
    if (d < 0 || d >= dim) throw std::invalid_argument("MultiIndex: direction out of range");
    return d;
  }

  std::array<int, 3> e_{0, 0, 0};
  int dim_;
};

inline double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// alpha! = prod_d alpha_d!
inline double multi_factorial(const MultiIndex& a) {
  double r = 1.0;
  for (int d = 0; d < a.dim(); ++d) r *= factorial(a[d]);
  return r;
}

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

// Graded reverse lexicographic order: lower total degree first; within a
// degree class the index with the larger entry at the last differing
// position comes first, so e.g. (0,1) precedes (1,0).
inline bool grevlex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.dim() - 1; i >= 0; --i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

}  // namespace hme
