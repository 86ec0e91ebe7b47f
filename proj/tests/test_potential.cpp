#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "ratgmp/potential.hpp"

using namespace ratgmp;

TEST_CASE("capacity of intervals and symmetric two-band sets") {
  CHECK(std::abs(equilibrium(FiniteGapSet({{-2.0, 2.0}})).capacity() - 1.0) <= 1e-12);
  CHECK(std::abs(equilibrium(FiniteGapSet({{1.0, 4.0}})).capacity() - 0.75) <= 1e-12);
  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}, std::pair{2.0, 2.5}}) {
    const auto m = equilibrium(FiniteGapSet({{-b, -a}, {a, b}}));
    CHECK(std::abs(m.capacity() - oracle::symmetric_capacity(a, b)) <= 1e-10);
    REQUIRE(m.numerator_zeros().size() == 1);
    CHECK(std::abs(m.numerator_zeros()[0]) <= 1e-12);
  }
}

TEST_CASE("equilibrium density integrates to one with zero gap residuals") {
  const auto m = equilibrium(FiniteGapSet({{-3.0, -2.2}, {-1.0, 0.5}, {1.0, 2.0}}));
  CHECK(m.measure().total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  for (double r : m.gap_residuals()) CHECK(std::abs(r) <= 1e-10);
  // G vanishes on E.
  for (double x : {-2.5, 0.0, 1.5}) CHECK(std::abs(m.green(x)) <= 1e-12);
}

TEST_CASE("Green function closed forms") {
  CHECK(std::abs(green(FiniteGapSet({{-2.0, 2.0}}), {0.0, 2.0}, ExtendedReal::infinity()) - std::log(1.0 + std::sqrt(2.0))) <= 1e-10);
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const GreenEvaluator ge(e);
  for (std::complex<double> z : {std::complex<double>{0.0, 0.0}, {0.5, 0.0}, {3.0, 0.0}, {0.3, 0.8}, {-1.5, 0.2}, {10.0, -4.0}})
    CHECK(std::abs(ge.green(z, ExtendedReal::infinity()) - oracle::symmetric_green(z, 1.0, 2.0)) <= 1e-10);
}

TEST_CASE("Green function agrees with the logarithmic potential") {
  const auto m = equilibrium(FiniteGapSet({{-3.0, -1.0}, {0.0, 2.0}}));
  for (std::complex<double> z : {std::complex<double>{-0.5, 0.0}, {1.0, 1.0}, {4.0, 0.5}})
    CHECK(std::abs(m.green(z) - (m.robin() + m.log_potential(z))) <= 1e-9);
}

TEST_CASE("symmetry and conformal invariance for finite poles") {
  const FiniteGapSet e({{-2.0, -1.0}, {0.5, 2.0}});
  const GreenEvaluator ge(e);
  const ExtendedReal w1(0.0), w2(-0.3), w3(3.0);
  CHECK(std::abs(ge.green(w1, w2) - ge.green(w2, w1)) <= 1e-8);
  CHECK(std::abs(ge.green(w1, w3) - ge.green(w3, w1)) <= 1e-8);
  CHECK(std::abs(ge.green(w3, ExtendedReal::infinity()) - ge.green(ExtendedReal::infinity(), w3)) <= 1e-8);
  for (const MoebiusMap& f : {MoebiusMap::translation(0.7), MoebiusMap::scaling(3.0), MoebiusMap::pole_to_infinity(0.2)}) {
    const GreenEvaluator gf(e.image(f));
    const std::complex<double> z(0.1, 0.6);
    CHECK(std::abs(ge.green(z, w3) - gf.green(f.apply(z), f.apply(w3))) <= 1e-8);
  }
}

TEST_CASE("lambda constants for the interval and symmetric two-band set") {
  // [-2, 2] with C = (infinity): lambda = 1 / cap = 1.
  CHECK(gamma_lambda(FiniteGapSet({{-2.0, 2.0}}), PoleSequence({ExtendedReal::infinity()}), 1).lambda == doctest::Approx(1.0).epsilon(1e-10));
  const auto d = oracle::symmetric_discriminant(1.0, 2.0);
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const PoleSequence c({ExtendedReal(0.0), ExtendedReal::infinity()});
  CHECK(gamma_lambda(e, c, 1).lambda == doctest::Approx(d.lambda1).epsilon(1e-8));
  CHECK(gamma_lambda(e, c, 2).lambda == doctest::Approx(d.lambda2).epsilon(1e-8));
}

TEST_CASE("rho_EC is a probability measure on E") {
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const Measure rho = rho_EC(e, PoleSequence({ExtendedReal(0.0), ExtendedReal::infinity()}));
  CHECK(rho.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rho.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(calG(e, PoleSequence({ExtendedReal(0.0), ExtendedReal::infinity()}), {1.5, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
}
