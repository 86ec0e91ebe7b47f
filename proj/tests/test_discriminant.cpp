#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "ratgmp/discriminant.hpp"

using namespace ratgmp;

TEST_CASE("interval discriminant is affine") {
  const Discriminant d = fit_discriminant(FiniteGapSet({{-2.0, 2.0}}));
  REQUIRE(d.lambdas().size() == 1);
  CHECK(d.lambdas()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(d.d()) <= 1e-12);
  const Discriminant d2 = fit_discriminant(FiniteGapSet({{1.0, 5.0}}));
  CHECK(d2(1.0) == doctest::Approx(-2.0));
  CHECK(d2(5.0) == doctest::Approx(2.0));
}

TEST_CASE("symmetric two-band discriminant matches the closed form") {
  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{1.0, 3.0}, std::pair{0.3, 1.1}}) {
    const auto ref = oracle::symmetric_discriminant(a, b);
    const Discriminant d = fit_discriminant(FiniteGapSet({{-b, -a}, {a, b}}));
    CHECK(std::abs(d.lambda(1) - ref.lambda1) <= 1e-9);
    CHECK(std::abs(d.lambda(2) - ref.lambda2) <= 1e-9);
    CHECK(std::abs(d.d() - ref.d) <= 1e-9);
    CHECK(std::abs(d.zeros()[0] - ref.c1) <= 1e-9);
    for (double r : d.endpoint_residuals()) CHECK(std::abs(r) <= 1e-10);
    CHECK(d.residue_cross_check <= 1e-5);
  }
}

TEST_CASE("asymmetric sets: preimage of [-2, 2] is E") {
  for (const FiniteGapSet& e : {FiniteGapSet({{-3.0, -1.5}, {0.0, 1.0}}), FiniteGapSet({{-4.0, -3.0}, {-1.0, 0.5}, {2.0, 4.0}})}) {
    const Discriminant d = fit_discriminant(e);
    CHECK(check_preimage(d).ok());
    CHECK(d.residue_cross_check <= 1e-5);
    for (std::size_t k = 0; k < d.zeros().size(); ++k) CHECK(e.gap_index(d.zeros()[k]) == static_cast<int>(k));
    for (double x : e.endpoints()) CHECK(std::abs(std::abs(d(x)) - 2.0) <= 1e-8);
  }
}

TEST_CASE("Ahlfors modulus is one on E and below one off E") {
  const FiniteGapSet e({{-2.0, -1.0}, {0.5, 2.0}});
  const GreenEvaluator ge(e);
  const Discriminant d = fit_discriminant(e);
  CHECK(ahlfors_abs(ge, d, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
  const std::complex<double> z(0.2, 0.7);
  const double psi = ahlfors_abs(ge, d, z);
  CHECK(psi < 1.0);
  // |Delta| = |Psi + 1/Psi| is bounded by |Psi| + 1/|Psi| and at least 1/|Psi| - |Psi|.
  CHECK(std::abs(d(z)) <= psi + 1.0 / psi + 1e-9);
  CHECK(std::abs(d(z)) >= 1.0 / psi - psi - 1e-9);
}

TEST_CASE("free Jacobi matrix satisfies the magic formula block by block") {
  const Measure semicircle = Measure::chebyshev_type(FiniteGapSet({{-2.0, 2.0}}), {-2.0, 2.0});
  const GmpFamily fam = build_family(semicircle, PoleSequence({ExtendedReal::infinity()}), 30);
  const Discriminant d = fit_discriminant(FiniteGapSet({{-2.0, 2.0}}));
  const BlockJacobi j = apply_to_gmp(d, fam);
  const MagicResidual m = magic_residual(j);
  REQUIRE(m.last >= m.first);
  for (int l = m.first; l <= m.last; ++l) CHECK(m.block_contribution[l] <= 1e-12);
  CHECK(m.h_plus <= 1e-11);
}

TEST_CASE("arcsine block Jacobi form has a single defective block") {
  const GmpFamily fam = build_family(Measure::arcsine({-2.0, 2.0}), PoleSequence({ExtendedReal::infinity()}), 30);
  const MagicResidual m = magic_residual(apply_to_gmp(fit_discriminant(FiniteGapSet({{-2.0, 2.0}})), fam));
  CHECK(m.block_contribution[0] == doctest::Approx(std::pow(std::sqrt(2.0) - 1.0, 2)).epsilon(1e-9));
  for (int l = 1; l <= m.last; ++l) CHECK(m.block_contribution[l] <= 1e-12);
}

TEST_CASE("two-band Delta(A) is block Jacobi of type 3") {
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const Discriminant d = fit_discriminant(e);
  PrecisionPolicy p;
  p.start_bits = 256;
  const GmpFamily fam = build_family(equilibrium(e).measure(), d.poles(), 40, p);
  const BlockJacobi j = apply_to_gmp(d, fam);
  CHECK(j.block_size() == 2);
  CHECK(j.type3_defect <= 1e-9);
  CHECK(j.det_identity_error <= 1e-6);
  const MagicResidual m = magic_residual(j);
  for (int l = std::max(m.first, 2); l <= m.last; ++l) CHECK(m.block_contribution[l] <= 1e-10);
}

TEST_CASE("magic_solve on the interval returns the free matrix") {
  const Discriminant d = fit_discriminant(FiniteGapSet({{-2.0, 2.0}}));
  const PeriodicGmp a = magic_solve(d, Eigen::VectorXd::Constant(1, 0.7), Eigen::VectorXd::Constant(1, 0.3));
  CHECK(std::abs(a.p(0) - 1.0) <= 1e-9);
  CHECK(std::abs(a.q(0)) <= 1e-9);
  CHECK(a.residual <= 1e-9);
}

TEST_CASE("two-band magic_solve root satisfies lambda_k Lambda_k = 1") {
  const Discriminant d = fit_discriminant(FiniteGapSet({{-3.0, -1.5}, {0.0, 1.0}}));
  const PeriodicGmp a = magic_solve(d, Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Zero(2));
  CHECK(a.residual <= 1e-9);
  for (double x : a.lambda_big_lambda) CHECK(std::abs(x - 1.0) <= 1e-6);
  // The symbol's spectrum over theta covers E and nothing else.
  const auto c = d.zeros();
  for (double theta : {0.0, 0.9, 2.2}) {
    const Eigen::MatrixXcd s = periodic_symbol(a, c, theta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    for (int i = 0; i < es.eigenvalues().size(); ++i) CHECK(d.set().contains(es.eigenvalues()(i), 1e-8));
  }
}
