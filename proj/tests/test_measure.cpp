#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "ratgmp/measure.hpp"

using namespace ratgmp;

TEST_CASE("arcsine measure mass and distribution") {
  const Measure mu = Measure::arcsine({-2.0, 2.0});
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : {-1.9, -1.0, 0.0, 0.3, 1.5}) CHECK(std::abs(mu.cdf(x) - oracle::arcsine_cdf(x)) <= 1e-8);
  const auto e = mu.essential_gap_set();
  REQUIRE(e);
  CHECK(e->genus() == 0);
  CHECK_FALSE(mu.touches_infinity());
  CHECK_FALSE(mu.finite_support_size());
}

TEST_CASE("discretization integrates polynomials exactly") {
  const Measure mu = Measure::arcsine({-2.0, 2.0});
  const NodeSet<double> n = mu.discretize<double>(64);
  double m2 = 0.0, m4 = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    total += n.w[i];
    m2 += n.w[i] * n.x[i] * n.x[i];
    m4 += n.w[i] * std::pow(n.x[i], 4);
  }
  // Arcsine moments on [-2, 2] are the central binomial coefficients.
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m2 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("pushforward keeps mass and moves the support") {
  const Measure mu = Measure::arcsine({-2.0, 2.0});
  const Measure nu = mu.pushforward(MoebiusMap::negative_reciprocal());
  CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nu.touches_infinity());
  CHECK(nu.charges(ExtendedReal::infinity()));
  CHECK_FALSE(nu.charges(ExtendedReal(0.0)));
  // <f, g> is invariant: integrate 1/(1 + x^2) against mu, and its image against nu.
  auto f = [](const ExtendedReal& x) -> std::complex<double> { return 1.0 / (1.0 + x.value() * x.value()); };
  auto g = [](const ExtendedReal& y) -> std::complex<double> {
    if (y.is_infinite()) return 1.0;
    const double x = -1.0 / y.value();
    return 1.0 / (1.0 + x * x);
  };
  auto one = [](const ExtendedReal&) -> std::complex<double> { return 1.0; };
  CHECK(inner_product(one, f, mu).real() == doctest::Approx(inner_product(one, g, nu).real()).epsilon(1e-10));
}

TEST_CASE("atomic measures normalize") {
  const Measure mu = Measure::atomic({{ExtendedReal(0.0), 2.0}, {ExtendedReal(1.0), 6.0}});
  CHECK(mu.finite_support_size() == 2u);
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.cdf(0.5) == doctest::Approx(0.25));
}

TEST_CASE("Chebyshev-type density on two bands") {
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const Measure mu = Measure::chebyshev_type(e, {0.0});
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mu.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mu.essential_gap_set()->genus() == 1);
}

TEST_CASE("pole sequence bookkeeping") {
  const PoleSequence c({ExtendedReal(0.0), ExtendedReal(5.0), ExtendedReal::infinity()});
  CHECK(c.genus() == 2);
  CHECK(c.infinity_slot() == 3);
  CHECK(c.slot_of(0) == 3);
  CHECK(c.slot_of(1) == 1);
  CHECK(c.slot_of(4) == 1);
  CHECK(c.slot_of(6) == 3);
  CHECK(c.order_of(0) == 0);
  CHECK(c.order_of(3) == 1);
  CHECK(c.order_of(4) == 2);
  const BasisFunction r = basis_r(4, c);
  CHECK(r.order == 2);
  CHECK(std::abs(r(std::complex<double>(1.0, 0.0)) - 1.0) < 1e-15);  // (0 - 1)^{-2}
  CHECK_THROWS_AS(c.validate_for(Measure::arcsine({-2.0, 2.0})), DomainError);
  CHECK_NOTHROW(PoleSequence({ExtendedReal(5.0), ExtendedReal::infinity()}).validate_for(Measure::arcsine({-2.0, 2.0})));
}

TEST_CASE("double Gram matrix flags singularity") {
  const Measure mu = Measure::atomic({{ExtendedReal(0.0), 1.0}, {ExtendedReal(1.0), 1.0}});
  CHECK(gram(mu, PoleSequence({ExtendedReal::infinity()}), 3).singular);
  CHECK_FALSE(gram(Measure::arcsine({-2.0, 2.0}), PoleSequence({ExtendedReal::infinity()}), 3).singular);
}
