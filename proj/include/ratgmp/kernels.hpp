#pragma once

// Data-parallel kernels. Every kernel has a serial reference path and an
// OpenMP path; both accumulate each output entry in the same order, so the
// results agree bit for bit.

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ratgmp/linalg.hpp"
#include "ratgmp/measure.hpp"

namespace ratgmp::kernels {

enum class Exec { Serial, Parallel };

int max_threads();

namespace detail {

// r_0..r_N at a single node, written to out[0..N].
template <class Real>
void basis_row(const Real& x, bool at_infinity, const PoleSequence& c, int n_max, Real* out) {
  const int p = c.period();
  std::vector<Real> inv(p), power(p, Real(1));
  for (int k = 1; k <= p; ++k) {
    const ExtendedReal& ck = c.pole(k);
    if (at_infinity) inv[k - 1] = Real(0);
    else if (ck.is_infinite()) inv[k - 1] = x;
    else inv[k - 1] = Real(1) / (Real(ck.value()) - x);
  }
  out[0] = Real(1);
  for (int n = 1; n <= n_max; ++n) {
    const int k = c.slot_of(n);
    if (at_infinity && c.pole(k).is_infinite())
      throw DomainError("basis function with a pole at infinity evaluated at infinity");
    power[k - 1] *= inv[k - 1];
    out[n] = power[k - 1];
  }
}

}  // namespace detail

// V(i, n) = r_n(x_i).
template <class Real>
DenseMatrix<Real> basis_matrix(const NodeSet<Real>& nodes, const PoleSequence& c, int n_max,
                               Exec exec) {
  const int m = static_cast<int>(nodes.size());
  DenseMatrix<Real> v(m, n_max + 1);
  if (exec == Exec::Serial) {
    for (int i = 0; i < m; ++i) detail::basis_row(nodes.x[i], nodes.at_infinity[i] != 0, c, n_max, v.row(i));
    return v;
  }
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    try {
      detail::basis_row(nodes.x[i], nodes.at_infinity[i] != 0, c, n_max, v.row(i));
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw DomainError("basis function with a pole at infinity evaluated at infinity");
  return v;
}

// G(m, n) = sum_i w_i V(i, m) V(i, n), summed over i in increasing order.
template <class Real>
DenseMatrix<Real> gram(const DenseMatrix<Real>& v, const std::vector<Real>& w, Exec exec) {
  const int m = v.rows();
  const int n = v.cols();
  DenseMatrix<Real> g(n, n);
  if (exec == Exec::Serial) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b <= a; ++b) {
        Accumulator<Real> acc;
        for (int i = 0; i < m; ++i) acc.add_product(Real(w[i] * v(i, a)), v(i, b));
        g(a, b) = g(b, a) = acc.value();
      }
    return g;
  }
  // Column-major copy so the inner reduction streams contiguous memory.
  const DenseMatrix<Real> vt = v.transposed();
  DenseMatrix<Real> wvt(n, m);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) wvt(a, i) = w[i] * vt(a, i);
#pragma omp parallel for schedule(dynamic, 1)
  for (int a = 0; a < n; ++a) {
    const Real* wa = wvt.row(a);
    for (int b = 0; b <= a; ++b) {
      const Real* vb = vt.row(b);
      Accumulator<Real> acc;
      for (int i = 0; i < m; ++i) acc.add_product(wa[i], vb[i]);
      g(a, b) = acc.value();
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) g(b, a) = g(a, b);
  return g;
}

// Phi(i, n) = sqrt(w_i) * sum_{l <= n} T(n, l) V(i, l), rounded to double.
template <class Real>
Eigen::MatrixXd weighted_projection(const DenseMatrix<Real>& v, const std::vector<Real>& w,
                                    const DenseMatrix<Real>& t, Exec exec) {
  using std::sqrt;
  const int m = v.rows();
  const int n = t.rows();
  Eigen::MatrixXd phi(m, n);
  auto fill_row = [&](int i) {
    const Real sw = sqrt(w[i]);
    const Real* vi = v.row(i);
    for (int a = 0; a < n; ++a) {
      const Real* ta = t.row(a);
      Accumulator<Real> acc;
      for (int l = 0; l <= a; ++l) acc.add_product(ta[l], vi[l]);
      phi(i, a) = to_double(Real(sw * acc.value()));
    }
  };
  if (exec == Exec::Serial) {
    for (int i = 0; i < m; ++i) fill_row(i);
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) fill_row(i);
  }
  return phi;
}

// A(a, b) = sum_i Phi(i, a) f_i Phi(i, b).
Eigen::MatrixXd multiplication_matrix(const Eigen::MatrixXd& phi, const std::vector<double>& f,
                                      Exec exec);

struct JacobiSample {
  std::vector<double> a;
  std::vector<double> b;
};

// For each m in [m_first, m_last]: min over samples of
// sum_{k=1..horizon} e^{-k} (|a_{m+k} - a~_k| + |b_{m+k} - b~_k|), 1-based sequences.
std::vector<double> nevai_distances(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<JacobiSample>& samples, int m_first,
                                    int m_last, int horizon, Exec exec);

}  // namespace ratgmp::kernels
