// Serial versus OpenMP timings for the hot kernels.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ratgmp/kernels.hpp"
#include "ratgmp/measure.hpp"
#include "ratgmp/precision.hpp"

namespace {

using namespace ratgmp;
using kernels::Exec;

const PoleSequence& poles() {
  static const PoleSequence c({ExtendedReal(0.0), ExtendedReal::infinity()});
  return c;
}

template <class Real>
const NodeSet<Real>& nodes() {
  static const NodeSet<Real> n =
      Measure::chebyshev_type(FiniteGapSet({{-3.0, -1.0}, {1.0, 3.0}}), {}).template discretize<Real>(256);
  return n;
}

template <class Real, Exec E>
void BM_Basis(benchmark::State& st) {
  const auto& n = nodes<Real>();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::basis_matrix(n, poles(), static_cast<int>(st.range(0)), E));
}

template <class Real, Exec E>
void BM_Gram(benchmark::State& st) {
  const auto& n = nodes<Real>();
  const auto v = kernels::basis_matrix(n, poles(), static_cast<int>(st.range(0)), Exec::Serial);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gram(v, n.w, E));
}

template <Exec E>
void BM_Multiplication(benchmark::State& st) {
  const int m = 2048, n = static_cast<int>(st.range(0));
  Eigen::MatrixXd phi = Eigen::MatrixXd::Random(m, n);
  std::vector<double> f(m);
  for (int i = 0; i < m; ++i) f[i] = std::cos(0.01 * i);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::multiplication_matrix(phi, f, E));
}

template <Exec E>
void BM_Nevai(benchmark::State& st) {
  const int len = static_cast<int>(st.range(0));
  std::vector<double> a(len + 64), b(len + 64, 0.0);
  for (std::size_t m = 0; m < a.size(); ++m) a[m] = 1.0 + 1.0 / double(m + 1);
  std::vector<kernels::JacobiSample> samples(64, {std::vector<double>(40, 1.0), std::vector<double>(40, 0.0)});
  for (auto _ : st) benchmark::DoNotOptimize(kernels::nevai_distances(a, b, samples, 1, len, 40, E));
}

}  // namespace

BENCHMARK(BM_Basis<double, Exec::Serial>)->Arg(100)->Arg(400);
BENCHMARK(BM_Basis<double, Exec::Parallel>)->Arg(100)->Arg(400);
BENCHMARK(BM_Gram<double, Exec::Serial>)->Arg(100)->Arg(200);
BENCHMARK(BM_Gram<double, Exec::Parallel>)->Arg(100)->Arg(200);
BENCHMARK(BM_Gram<real256, Exec::Serial>)->Arg(60);
BENCHMARK(BM_Gram<real256, Exec::Parallel>)->Arg(60);
BENCHMARK(BM_Multiplication<Exec::Serial>)->Arg(100)->Arg(200);
BENCHMARK(BM_Multiplication<Exec::Parallel>)->Arg(100)->Arg(200);
BENCHMARK(BM_Nevai<Exec::Serial>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Nevai<Exec::Parallel>)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
