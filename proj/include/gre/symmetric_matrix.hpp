#ifndef GRE_SYMMETRIC_MATRIX_HPP
#define GRE_SYMMETRIC_MATRIX_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gre/errors.hpp"

namespace gre {

/// Dense n-by-n symmetric matrix of edge weights / parameters.
///
/// Symmetry is enforced by construction: the only mutator, set_pair, writes
/// both (i,j) and (j,i), so the two halves are bit-identical at all times.
/// Adjacency matrices additionally keep a zero diagonal ("hollow"); estimate
/// matrices need not.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int n) : n_(n) {
    if (n < 2) throw InputError("SymmetricMatrix requires n >= 2");
    values_.assign(static_cast<std::size_t>(n) * n, 0.0);
  }

  int size() const { return n_; }

  double operator()(int i, int j) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_);
    return values_[static_cast<std::size_t>(i) * n_ + j];
  }

  /// Sets entry (i,j) and its mirror (j,i). i == j writes the diagonal.
  void set_pair(int i, int j, double value) {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_);
    values_[static_cast<std::size_t>(i) * n_ + j] = value;
    values_[static_cast<std::size_t>(j) * n_ + i] = value;
  }

  bool is_hollow() const {
    for (int i = 0; i < n_; ++i)
      if ((*this)(i, i) != 0.0) return false;
    return true;
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  /// Row-major backing store (read-only); used by serialization and digests.
  const std::vector<double>& data() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

}  // namespace gre

#endif
