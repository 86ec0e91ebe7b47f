#pragma once

#include <cmath>
#include <vector>

#include "ratgmp/precision.hpp"

namespace ratgmp {

// Row-major dense matrix over any real scalar type.
template <class Real>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, Real(0)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Real& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const Real& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  const Real* row(int i) const { return data_.data() + std::size_t(i) * cols_; }
  Real* row(int i) { return data_.data() + std::size_t(i) * cols_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Real> data_;
};

template <class Real>
struct CholeskyInverse {
  DenseMatrix<Real> t;              // lower triangular inverse of the Cholesky factor
  std::vector<Real> scaled_pivots;  // pivots of the unit-diagonal (Jacobi scaled) Gram matrix
  // Squared row norms of the scaled inverse factor; prefix sums bound the
  // condition number of leading blocks of the scaled Gram matrix.
  std::vector<double> inverse_row_norm2;
  int rank = 0;                     // number of positive pivots before breakdown
};

// Cholesky of D G D with D = diag(G)^(-1/2), then T = L^{-1} for G = L L^T.
// Stops at the first nonpositive pivot; only the leading rank x rank block is valid then.
template <class Real>
CholeskyInverse<Real> jacobi_scaled_cholesky_inverse(const DenseMatrix<Real>& g) {
  using std::sqrt;
  const int n = g.rows();
  std::vector<Real> dscale(n);
  for (int i = 0; i < n; ++i) {
    if (!(g(i, i) > 0)) throw NumericalFailure("Gram matrix has a nonpositive diagonal entry");
    dscale[i] = Real(1) / sqrt(g(i, i));
  }
  DenseMatrix<Real> l(n, n);
  CholeskyInverse<Real> out;
  int rank = n;
  for (int j = 0; j < n; ++j) {
    Accumulator<Real> dacc;
    for (int k = 0; k < j; ++k) dacc.add_product(l(j, k), l(j, k));
    const Real d = g(j, j) * dscale[j] * dscale[j] - dacc.value();
    if (!(d > 0)) {
      rank = j;
      break;
    }
    out.scaled_pivots.push_back(d);
    const Real ljj = sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      Accumulator<Real> acc;
      for (int k = 0; k < j; ++k) acc.add_product(l(i, k), l(j, k));
      l(i, j) = (g(i, j) * dscale[i] * dscale[j] - acc.value()) / ljj;
    }
  }
  out.rank = rank;
  // Forward substitution for the inverse of the scaled factor, then undo the scaling.
  DenseMatrix<Real> t(rank, rank);
  for (int i = 0; i < rank; ++i) {
    t(i, i) = Real(1) / l(i, i);
    for (int j = 0; j < i; ++j) {
      Accumulator<Real> acc;
      for (int k = j; k < i; ++k) acc.add_product(l(i, k), t(k, j));
      t(i, j) = -acc.value() / l(i, i);
    }
    Real r2 = Real(0);
    for (int j = 0; j <= i; ++j) r2 += t(i, j) * t(i, j);
    out.inverse_row_norm2.push_back(to_double(r2));
  }
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j <= i; ++j) t(i, j) *= dscale[j];
  out.t = std::move(t);
  return out;
}

}  // namespace ratgmp
