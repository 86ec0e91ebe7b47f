#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "ratgmp/orf.hpp"

using namespace ratgmp;

namespace {

Measure atomic_measure(const oracle::AtomicCase& c) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < c.x.size(); ++i) atoms.push_back({ExtendedReal(c.x[i]), c.w[i]});
  return Measure::atomic(atoms);
}

PoleSequence pole_sequence(const std::vector<oracle::Pole>& p) {
  std::vector<ExtendedReal> pts;
  for (const auto& x : p) pts.push_back(x ? ExtendedReal(*x) : ExtendedReal::infinity());
  return PoleSequence(pts);
}

const Measure& arcsine() {
  static const Measure mu = Measure::arcsine({-2.0, 2.0});
  return mu;
}

}  // namespace

TEST_CASE("arcsine leading coefficients are the Chebyshev values") {
  const OrthoSystem s = orthonormalize(arcsine(), PoleSequence({ExtendedReal::infinity()}), 40);
  REQUIRE(s.n_max() == 40);
  for (int n = 0; n <= 40; ++n) CHECK(std::abs(s.kappa(n) - oracle::arcsine_kappa(n)) <= 1e-10);
  CHECK(s.orthonormality_defect() < 1e-8);
}

TEST_CASE("tau_n of the arcsine law is a normalized Chebyshev polynomial") {
  const OrthoSystem s = orthonormalize(arcsine(), PoleSequence({ExtendedReal::infinity()}), 12);
  for (double x : {-1.7, -0.3, 0.4, 1.9}) {
    const double theta = std::acos(x / 2.0);
    for (int n = 1; n <= 12; ++n) CHECK(s.evaluate(n, x).real() == doctest::Approx(std::sqrt(2.0) * std::cos(n * theta)).epsilon(1e-10));
  }
}

TEST_CASE("main path agrees with the 512-bit brute-force oracle on atomic measures") {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::AtomicCase c = oracle::random_atomic(rng);
    CAPTURE(trial);
    CAPTURE(c.n_max);
    const auto ref = oracle::brute_force(c);
    const OrthoSystem s = orthonormalize(atomic_measure(c), pole_sequence(c.poles), c.n_max);
    REQUIRE(s.n_max() == c.n_max);
    for (int n = 0; n <= c.n_max; ++n) {
      CHECK(oracle::relative(s.kappa(n), ref.kappa[n]) <= 1e-9);
      double scale = 0.0;
      for (int l = 0; l <= n; ++l) scale = std::max(scale, std::abs(static_cast<double>(ref.t[n][l])));
      for (int l = 0; l <= n; ++l)
        CHECK(std::abs(s.coefficient(n, l) - static_cast<double>(ref.t[n][l])) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("precision escalates on ill-conditioned Gram matrices") {
  std::vector<Atom> atoms;
  for (int i = 0; i < 24; ++i) atoms.push_back({ExtendedReal(-1.0 + 2.0 * i / 23.0), 1.0 / 24});
  const OrthoSystem s = orthonormalize(Measure::atomic(atoms), PoleSequence({ExtendedReal::infinity()}), 22);
  CHECK(s.precision_bits() > 53);
  CHECK(s.attempts().size() >= 2);
  CHECK(s.attempts().back().accepted);
}

TEST_CASE("rank loss truncates only when allowed") {
  std::vector<Atom> atoms = {{ExtendedReal(-0.5), 0.25}, {ExtendedReal(0.0), 0.5}, {ExtendedReal(0.5), 0.25}};
  const PoleSequence c({ExtendedReal::infinity()});
  CHECK_THROWS_AS(orthonormalize(Measure::atomic(atoms), c, 6), NumericalFailure);
  PrecisionPolicy p;
  p.truncate_on_rank_loss = true;
  const OrthoSystem s = orthonormalize(Measure::atomic(atoms), c, 6, p);
  CHECK(s.truncated());
  CHECK(s.n_max() == 2);
}

TEST_CASE("poles on the support are rejected") {
  CHECK_THROWS_AS(orthonormalize(arcsine(), PoleSequence({ExtendedReal(1.0), ExtendedReal::infinity()}), 4), DomainError);
}

TEST_CASE("Chebyshev zeros are the cosine nodes") {
  const OrthoSystem s = orthonormalize(arcsine(), PoleSequence({ExtendedReal::infinity()}), 20);
  for (int n : {1, 5, 20}) {
    const ZeroSet z = zeros(s, n);
    const auto ref = oracle::chebyshev_zeros(n);
    REQUIRE(z.zeros.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(z.zeros[i].value() - ref[i]) <= 1e-9);
    CHECK(check_zero_invariants(z, s).ok());
  }
}

TEST_CASE("zeros of rational tau_n stay out of the own gap") {
  const FiniteGapSet e({{-3.0, -1.0}, {1.0, 3.0}});
  const OrthoSystem s = orthonormalize(Measure::chebyshev_type(e, {0.0}), PoleSequence({ExtendedReal(0.0), ExtendedReal::infinity()}), 30);
  for (int n = 1; n <= 30; ++n) {
    CAPTURE(n);
    const ZeroSet z = zeros(s, n);
    const ZeroCheck chk = check_zero_invariants(z, s);
    CHECK(chk.ok());
    CHECK(static_cast<int>(z.zeros.size()) >= n - 1);
  }
}

TEST_CASE("Moebius covariance of |tau_n|") {
  const PoleSequence c({ExtendedReal::infinity()});
  const OrthoSystem s = orthonormalize(arcsine(), c, 30);
  const std::vector<std::complex<double>> pts = {{0.3, 0.7}, {-1.2, 0.4}, {2.5, -1.0}, {0.0, 3.0}};
  for (const MoebiusMap& f : {MoebiusMap::translation(1.0), MoebiusMap::scaling(2.0), MoebiusMap::negative_reciprocal(),
                              MoebiusMap::negation()}) {
    const OrthoSystem t = orthonormalize(arcsine().pushforward(f), c.image(f), 30);
    for (int n = 0; n <= 30; ++n)
      for (const auto& z : pts) {
        const double a = std::abs(s.evaluate(n, z));
        const double b = std::abs(t.evaluate(n, f.apply(z)));
        CHECK(std::abs(a - b) <= 1e-6 * a);
      }
  }
}
