#include "ratgmp/kernels.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ratgmp::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Eigen::MatrixXd multiplication_matrix(const Eigen::MatrixXd& phi, const std::vector<double>& f,
                                      Exec exec) {
  const int m = static_cast<int>(phi.rows());
  const int n = static_cast<int>(phi.cols());
  if (static_cast<int>(f.size()) != m) throw ConfigError("multiplier size does not match nodes");
  Eigen::MatrixXd out(n, n);
  if (exec == Exec::Serial) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b <= a; ++b) {
        Accumulator<double> acc;
        for (int i = 0; i < m; ++i) acc.add(phi(i, a) * f[i] * phi(i, b));
        out(a, b) = out(b, a) = acc.value();
      }
    return out;
  }
  // Eigen is column-major, so phi.col(a) is contiguous.
  Eigen::MatrixXd fphi = phi;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) fphi(i, a) = phi(i, a) * f[i];
#pragma omp parallel for schedule(dynamic, 1)
  for (int a = 0; a < n; ++a) {
    const double* fa = fphi.col(a).data();
    for (int b = 0; b <= a; ++b) {
      const double* pb = phi.col(b).data();
      Accumulator<double> acc;
      for (int i = 0; i < m; ++i) acc.add(fa[i] * pb[i]);
      out(a, b) = acc.value();
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) out(b, a) = out(a, b);
  return out;
}

std::vector<double> nevai_distances(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<JacobiSample>& samples, int m_first,
                                    int m_last, int horizon, Exec exec) {
  if (samples.empty()) throw ConfigError("torus sample set is empty");
  if (m_last < m_first) return {};
  const std::size_t need = static_cast<std::size_t>(m_last + horizon);
  if (a.size() < need || b.size() < need)
    throw ConfigError("Jacobi sequence too short for the requested shift range and horizon");
  for (const auto& s : samples)
    if (s.a.size() < static_cast<std::size_t>(horizon) || s.b.size() < static_cast<std::size_t>(horizon))
      throw ConfigError("torus sample shorter than the truncation horizon");
  std::vector<double> decay(horizon + 1);
  for (int k = 1; k <= horizon; ++k) decay[k] = std::exp(-double(k));

  auto one = [&](int m) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      double acc = 0.0;
      for (int k = 1; k <= horizon; ++k)
        acc += decay[k] * (std::abs(a[m + k - 1] - s.a[k - 1]) + std::abs(b[m + k - 1] - s.b[k - 1]));
      best = std::min(best, acc);
    }
    return best;
  };
  const int count = m_last - m_first + 1;
  std::vector<double> out(count);
  if (exec == Exec::Serial) {
    for (int i = 0; i < count; ++i) out[i] = one(m_first + i);
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) out[i] = one(m_first + i);
  }
  return out;
}

}  // namespace ratgmp::kernels
