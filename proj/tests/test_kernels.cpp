#include <doctest.h>

#include <cmath>

#include "ratgmp/kernels.hpp"
#include "ratgmp/precision.hpp"

using namespace ratgmp;
using kernels::Exec;

namespace {

template <class Real>
void check_paths_agree() {
  const PoleSequence c({ExtendedReal(0.0), ExtendedReal(4.0), ExtendedReal::infinity()});
  const NodeSet<Real> n = Measure::chebyshev_type(FiniteGapSet({{-3.0, -1.0}, {1.0, 3.0}}), {}).template discretize<Real>(48);
  const auto vs = kernels::basis_matrix(n, c, 20, Exec::Serial);
  const auto vp = kernels::basis_matrix(n, c, 20, Exec::Parallel);
  const auto gs = kernels::gram(vs, n.w, Exec::Serial);
  const auto gp = kernels::gram(vp, n.w, Exec::Parallel);
  for (int i = 0; i < vs.rows(); ++i)
    for (int j = 0; j < vs.cols(); ++j) REQUIRE(vs(i, j) == vp(i, j));
  for (int i = 0; i < gs.rows(); ++i)
    for (int j = 0; j < gs.cols(); ++j) CHECK(gs(i, j) == gp(i, j));
  DenseMatrix<Real> t(21, 21);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= i; ++j) t(i, j) = Real(1.0 / (1 + i + j));
  const Eigen::MatrixXd ps = kernels::weighted_projection(vs, n.w, t, Exec::Serial);
  const Eigen::MatrixXd pp = kernels::weighted_projection(vs, n.w, t, Exec::Parallel);
  CHECK((ps - pp).cwiseAbs().maxCoeff() == 0.0);
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bitwise in double") { check_paths_agree<double>(); }
TEST_CASE("serial and parallel kernels agree bitwise in 256 bits") { check_paths_agree<real256>(); }

TEST_CASE("Gram matrix of the arcsine law in the monomial basis holds its moments") {
  const PoleSequence c({ExtendedReal::infinity()});
  const NodeSet<double> n = Measure::arcsine({-2.0, 2.0}).discretize<double>(32);
  const auto g = kernels::gram(kernels::basis_matrix(n, c, 4, Exec::Serial), n.w, Exec::Serial);
  // Moments of the arcsine law: 1, 0, 2, 0, 6, 0, 20, 0, 70.
  const double moment[] = {1, 0, 2, 0, 6, 0, 20, 0, 70};
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) CHECK(g(i, j) == doctest::Approx(moment[i + j]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("multiplication and Nevai kernels agree across paths") {
  Eigen::MatrixXd phi(50, 8);
  std::vector<double> f(50);
  for (int i = 0; i < 50; ++i) {
    f[i] = std::sin(0.3 * i);
    for (int j = 0; j < 8; ++j) phi(i, j) = std::cos(0.1 * i * (j + 1));
  }
  CHECK((kernels::multiplication_matrix(phi, f, Exec::Serial) - kernels::multiplication_matrix(phi, f, Exec::Parallel))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  std::vector<double> a(300), b(300, 0.0);
  for (int m = 0; m < 300; ++m) a[m] = 1.0 + 1.0 / (m + 1);
  const std::vector<kernels::JacobiSample> s = {{std::vector<double>(40, 1.0), std::vector<double>(40, 0.0)}};
  CHECK(kernels::nevai_distances(a, b, s, 0, 200, 40, Exec::Serial) == kernels::nevai_distances(a, b, s, 0, 200, 40, Exec::Parallel));
}

TEST_CASE("basis evaluation at infinity is rejected for the infinite pole") {
  NodeSet<double> n;
  n.x = {0.0};
  n.at_infinity = {1};
  n.w = {1.0};
  CHECK_THROWS_AS(kernels::basis_matrix(n, PoleSequence({ExtendedReal::infinity()}), 2, Exec::Serial), DomainError);
  CHECK_THROWS_AS(kernels::basis_matrix(n, PoleSequence({ExtendedReal::infinity()}), 2, Exec::Parallel), DomainError);
  CHECK_NOTHROW(kernels::basis_matrix(n, PoleSequence({ExtendedReal(1.0)}), 2, Exec::Serial));
}
