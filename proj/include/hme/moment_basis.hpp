#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hme/multi_index.hpp"

namespace hme {

// All multi-indices |alpha| <= M in graded reverse lexicographic order.
inline std::vector<MultiIndex> enumerate_indices(int dim, int order) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("enumerate_indices: dimension must be 1, 2 or 3");
  if (order < 2)
    throw std::invalid_argument("enumerate_indices: order must be at least 2");
  std::vector<MultiIndex> out;
  MultiIndex a(dim);
  for (int a0 = 0; a0 <= order; ++a0) {
    a[0] = a0;
    if (dim == 1) {
      out.push_back(a);
      continue;
    }
    for (int a1 = 0; a0 + a1 <= order; ++a1) {
      a[1] = a1;
      if (dim == 2) {
        out.push_back(a);
        continue;
      }
      for (int a2 = 0; a0 + a1 + a2 <= order; ++a2) {
        a[2] = a2;
        out.push_back(a);
      }
    }
  }
  std::sort(out.begin(), out.end(), grevlex_less);
  return out;
}

// Ordered index set of a moment system with O(1) position lookup.
// Lookups outside the set (negative entry or degree > M) yield `absent`,
// and assembly routines treat such slots as zero coefficients.
class MomentBasis {
public:
  static constexpr int absent = -1;

  MomentBasis(int dim, int order)
      : dim_(dim), order_(order), indices_(enumerate_indices(dim, order)) {
    int table = 1;
    for (int d = 0; d < dim_; ++d) table *= order_ + 1;
    lookup_.assign(table, absent);
    for (int i = 0; i < size(); ++i) lookup_[encode(indices_[i])] = i;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& at(int pos) const { return indices_[pos]; }

  int position(const MultiIndex& a) const {
    if (!a.nonnegative() || a.degree() > order_) return absent;
    return lookup_[encode(a)];
  }

  int position_zero() const { return position(MultiIndex::zero(dim_)); }
  int position_unit(int d) const { return position(MultiIndex::unit(dim_, d)); }

  // e_i + e_j (i == j allowed).
  int position_pair(int i, int j) const {
    MultiIndex a(dim_);
    a[i] += 1;
    a[j] += 1;
    return position(a);
  }

private:
  int encode(const MultiIndex& a) const {
    int code = 0;
    for (int d = dim_ - 1; d >= 0; --d) code = code * (order_ + 1) + a[d];
    return code;
  }

  int dim_, order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> lookup_;
};

}  // namespace hme
