#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "ratgmp/regularity.hpp"

using namespace ratgmp;

TEST_CASE("trend verdicts") {
  VerdictRule rule;
  std::vector<int> n;
  std::vector<double> close, far, slow;
  for (int i = 1; i <= 40; ++i) {
    n.push_back(i);
    close.push_back(1.0 + 0.3 / i);
    far.push_back(0.5 + 0.01 / i);
    slow.push_back(1.0 + 2.0 / i);
  }
  CHECK(make_trend(n, close, 1.0, rule).verdict == Verdict::ConsistentWithRegular);
  CHECK(make_trend(n, far, 1.0, rule).verdict == Verdict::Inconsistent);
  // Last value 1.05 is outside the accept band but the c/n fit lands on the target.
  const Trend t = make_trend(n, slow, 1.0, rule);
  CHECK(t.verdict == Verdict::Inconclusive);
  CHECK(t.extrapolated == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(combine({Verdict::ConsistentWithRegular, Verdict::Inconsistent}) == Verdict::Inconsistent);
  CHECK(combine({Verdict::ConsistentWithRegular, Verdict::Inconclusive}) == Verdict::Inconclusive);
  CHECK(combine({Verdict::ConsistentWithRegular}) == Verdict::ConsistentWithRegular);
}

TEST_CASE("arcsine law is flagged regular") {
  const FiniteGapSet e({{-2.0, 2.0}});
  const OrthoSystem s = orthonormalize(Measure::arcsine({-2.0, 2.0}), PoleSequence({ExtendedReal::infinity()}), 60);
  const GMPMatrix a = build_gmp(s);
  const GreenEvaluator ge(e);
  RegularityOptions opt;
  opt.zero_ns = {20, 40, 60};
  const RegularityReport r = assess(s, &a, ge, opt);
  CHECK(r.verdict == Verdict::ConsistentWithRegular);
  CHECK(r.kappa->lower_bound_ok);
  CHECK(r.beta->upper_bound_ok);
  CHECK(r.growth->lower_bound_ok);
  CHECK(r.growth->points.size() == 20);
  CHECK(r.zeros->mass_bound_ok);
  CHECK(r.zeros->distance.back() <= 0.05);
}

TEST_CASE("CDF distance of Chebyshev zeros to the arcsine law") {
  const Measure mu = Measure::arcsine({-2.0, 2.0});
  for (int n : {10, 50}) {
    std::vector<ExtendedReal> z;
    for (double x : oracle::chebyshev_zeros(n)) z.emplace_back(x);
    // Zeros sit at the (j - 1/2)/n quantiles, so the sup distance is exactly 1/(2n).
    CHECK(cdf_distance(z, n, mu) == doctest::Approx(0.5 / n).epsilon(1e-6));
  }
}

TEST_CASE("Nevai distance and Cesaro averages for a_m = 1 + 1/m") {
  std::vector<double> a, b;
  for (int m = 1; m <= 1200; ++m) {
    a.push_back(1.0 + 1.0 / m);
    b.push_back(0.0);
  }
  const JacobiMatrix j(a, b);
  const TorusSampleSet t = TorusSampleSet::free_type(FiniteGapSet({{-2.0, 2.0}}), 40);
  // d_m = sum_k e^{-k} / (m + k) in closed form up to the horizon.
  for (int m : {0, 5, 100}) {
    double ref = 0.0;
    for (int k = 1; k <= 40; ++k) ref += std::exp(-k) / (m + k);
    CHECK(nevai_distance(j, m, t).value == doctest::Approx(ref).epsilon(1e-12));
  }
  const CesaroSection c2 = cesaro_stat(j, t, 100);
  const CesaroSection c3 = cesaro_stat(j, t, 1000);
  CHECK(c3.l1 < c2.l1);
  CHECK(c2.cauchy_schwarz_ok);
  const CesaroSection serial = cesaro_stat(j, t, 1000, 40, nullptr, kernels::Exec::Serial);
  CHECK(serial.l1 == c3.l1);
}

TEST_CASE("symmetric two-band torus samples have spectrum in E") {
  const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  const TorusSampleSet t = TorusSampleSet::symmetric_two_band(e, 16, 64);
  CHECK(t.samples.size() == 16);
  for (const auto& s : t.samples) {
    const Eigen::MatrixXd m = JacobiMatrix(s.a, s.b).truncation(60);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (int i = 0; i < es.eigenvalues().size(); ++i) CHECK(std::abs(es.eigenvalues()(i)) <= 2.0 + 1e-9);
  }
}

TEST_CASE("sparse statistics obey Markov's inequality") {
  std::vector<double> f;
  for (int m = 1; m <= 1000; ++m) f.push_back((m & (m - 1)) == 0 ? 1.0 : 1.0 / m);
  const SparseStats s = sparse_stats(f, 0.5, 1000);
  CHECK(s.markov_ok);
  CHECK(s.density <= s.average / 0.5);
  CHECK(s.density == doctest::Approx(10.0 / 1000));
}

TEST_CASE("rank-one shift clears the poles") {
  const JacobiMatrix j = JacobiMatrix::free(50);
  const PoleSequence c({ExtendedReal(0.0), ExtendedReal::infinity()});
  const RankOneShift s = rank_one_shift(j, c, 21, 1e-3);
  CHECK(s.margin >= 1e-3);
  // The 21 x 21 free truncation has 0 as an eigenvalue, so t = 0 must be skipped.
  CHECK(s.t != 0.0);
}

TEST_CASE("decaying coefficients are flagged inconsistent") {
  std::vector<double> a, b;
  for (int l = 1; l <= 60; ++l) {
    a.push_back(std::exp(-std::sqrt(double(l))));
    b.push_back(0.0);
  }
  // Spectral measure of the truncation: eigenvalues with squared first components.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(JacobiMatrix(a, b).truncation(60));
  std::vector<Atom> atoms;
  for (int i = 0; i < 60; ++i) atoms.push_back({ExtendedReal(es.eigenvalues()(i)), std::pow(es.eigenvectors()(0, i), 2)});
  PrecisionPolicy p;
  p.truncate_on_rank_loss = true;
  const OrthoSystem s = orthonormalize(Measure::atomic(atoms), PoleSequence({ExtendedReal::infinity()}), 30, p);
  const GMPMatrix gm = build_gmp(s);
  const GreenEvaluator ge(FiniteGapSet({{-2.0, 2.0}}));
  const BetaSection beta = beta_diagnostic(gm, ge);
  CHECK(beta.verdict == Verdict::Inconsistent);
}
