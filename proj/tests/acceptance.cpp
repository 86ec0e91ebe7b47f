// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "ratgmp/discriminant.hpp"
#include "ratgmp/regularity.hpp"

using namespace ratgmp;

namespace tol {
constexpr double kappa_abs = 1e-10;
constexpr double runtime_c1 = 10.0;
constexpr double covariance_rel = 1e-6;
constexpr double lambda_identity_rel = 1e-8;
constexpr double bandwidth_rel = 1e-10;
constexpr double rank_one = 1e-8;
constexpr double jacobi_abs = 1e-9;
constexpr double cap_interval = 1e-8;
constexpr double cap_two_band = 1e-6;
constexpr double green_2i = 1e-8;
constexpr double green_invariance = 1e-7;
constexpr double discriminant_abs = 1e-6;
constexpr double residue_rel = 1e-5;
constexpr double endpoint_abs = 1e-8;
constexpr double regularity_abs = 0.02;
constexpr double growth_slack = -0.05;
constexpr double product_slack = -0.02;
constexpr double zero_cdf = 0.05;
constexpr double magic_block = 1e-12;
constexpr double magic_free = 1e-9;
constexpr double magic_lambda = 1e-6;
constexpr double cesaro_avg = 0.01;
constexpr double runtime_c11 = 30.0;
constexpr double oracle_rel = 1e-9;
}  // namespace tol

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

const PoleSequence& at_infinity() {
  static const PoleSequence c({ExtendedReal::infinity()});
  return c;
}

const FiniteGapSet& two_band_set() {
  static const FiniteGapSet e({{-2.0, -1.0}, {1.0, 2.0}});
  return e;
}

const OrthoSystem& arcsine40() {
  static const OrthoSystem s = orthonormalize(Measure::arcsine({-2.0, 2.0}), at_infinity(), 40);
  return s;
}

// Two-band equilibrium measure with the Ahlfors poles (0, infinity), N = 200.
const GmpFamily& two_band200() {
  static const GmpFamily fam = [] {
    PrecisionPolicy p;
    p.start_bits = 256;
    const Discriminant d = fit_discriminant(two_band_set());
    return build_family(orthonormalize(equilibrium(two_band_set()).measure(), d.poles(), 200, p), p);
  }();
  return fam;
}

const GreenEvaluator& two_band_green() {
  static const GreenEvaluator ge(two_band_set());
  return ge;
}

struct Result {
  bool pass;
  std::string detail;
};

Result c1() {
  const auto t0 = clock_type::now();
  const OrthoSystem s = orthonormalize(Measure::arcsine({-2.0, 2.0}), at_infinity(), 40);
  const double dt = seconds_since(t0);
  double err = 0.0;
  for (int n = 0; n <= 40; ++n) err = std::max(err, std::abs(s.kappa(n) - oracle::arcsine_kappa(n)));
  std::ostringstream os;
  os << "max |kappa_n - ref| = " << err << ", " << s.precision_bits() << " bits, " << dt << " s";
  return {s.n_max() == 40 && err <= tol::kappa_abs && dt <= tol::runtime_c1, os.str()};
}

Result c2() {
  std::vector<std::complex<double>> pts;
  for (double x : {-2.5, -0.7, 0.3, 1.1, 2.8})
    for (double y : {-1.4, -0.35, 0.35, 1.4}) pts.emplace_back(x, y);
  const OrthoSystem& s = arcsine40();
  double worst = 0.0;
  for (const MoebiusMap& f : {MoebiusMap::translation(1.0), MoebiusMap::scaling(2.0), MoebiusMap::negative_reciprocal(),
                              MoebiusMap::negation()}) {
    const OrthoSystem t = orthonormalize(Measure::arcsine({-2.0, 2.0}).pushforward(f), at_infinity().image(f), 30);
    for (int n = 0; n <= 30; ++n)
      for (const auto& z : pts) {
        const double a = std::abs(s.evaluate(n, z));
        worst = std::max(worst, std::abs(a - std::abs(t.evaluate(n, f.apply(z)))) / a);
      }
  }
  std::ostringstream os;
  os << "max relative deviation " << worst << " over 4 maps, n <= 30, " << pts.size() << " points";
  return {worst <= tol::covariance_rel, os.str()};
}

Result c3() {
  const LambdaIdentity g0 = lambda_identity(build_family(arcsine40()));
  const LambdaIdentity g1 = lambda_identity(two_band200());
  std::ostringstream os;
  os << "g=0: " << g0.max_relative_error << " over " << g0.lambda.size() << " n; two-band: " << g1.max_relative_error
     << " over " << g1.lambda.size() << " n";
  return {g0.max_relative_error <= tol::lambda_identity_rel && g1.max_relative_error <= tol::lambda_identity_rel &&
              !g1.lambda.empty(),
          os.str()};
}

Result c4() {
  const GMPMatrix a0 = build_gmp(arcsine40());
  const StructureReport r0 = validate_structure(a0);
  const StructureReport r1 = validate_structure(two_band200().a);
  double jac = std::abs(a0(0, 1) - std::sqrt(2.0));
  for (int n = 1; n + 1 < a0.size(); ++n) jac = std::max(jac, std::abs(a0(n, n + 1) - 1.0));
  for (int n = 0; n < a0.size(); ++n) jac = std::max(jac, std::abs(a0(n, n)));
  const double band = std::max(r0.bandwidth_residual, r1.bandwidth_residual);
  const double rank = std::max(r0.max_rank_one_ratio, r1.max_rank_one_ratio);
  std::ostringstream os;
  os << "bandwidth/|A| " << band << ", sigma2/sigma1 " << rank << " (" << r1.blocks_checked << " blocks), g=0 Jacobi error "
     << jac;
  return {band <= tol::bandwidth_rel && rank <= tol::rank_one && jac <= tol::jacobi_abs && r1.blocks_checked > 0, os.str()};
}

Result c5() {
  const double cap0 = equilibrium(FiniteGapSet({{-2.0, 2.0}})).capacity();
  const double cap1 = equilibrium(two_band_set()).capacity();
  const double g2i = green(FiniteGapSet({{-2.0, 2.0}}), {0.0, 2.0}, ExtendedReal::infinity());
  const GreenEvaluator& ge = two_band_green();
  const std::vector<ExtendedReal> ws = {ExtendedReal(0.0), ExtendedReal(0.5), ExtendedReal(-3.0), ExtendedReal::infinity()};
  double sym = 0.0;
  for (const auto& a : ws)
    for (const auto& b : ws)
      if (!(a == b)) sym = std::max(sym, std::abs(ge.green(a, b) - ge.green(b, a)));
  double inv = 0.0;
  const std::vector<std::complex<double>> zs = {{0.2, 0.9}, {-1.5, 0.3}, {3.0, -2.0}};
  for (const MoebiusMap& f : {MoebiusMap::translation(1.0), MoebiusMap::scaling(2.0), MoebiusMap::negative_reciprocal(),
                              MoebiusMap::negation(), MoebiusMap::pole_to_infinity(0.5)}) {
    const GreenEvaluator gf(two_band_set().image(f));
    for (const auto& z : zs)
      for (const auto& w : ws) {
        if (f.pole() == w) continue;
        const ExtendedReal fw = f.apply(w);
        inv = std::max(inv, std::abs(ge.green(z, w) - gf.green(f.apply(z), fw)));
      }
  }
  std::ostringstream os;
  os << "cap[-2,2] err " << std::abs(cap0 - 1.0) << ", two-band cap err " << std::abs(cap1 - std::sqrt(3.0) / 2.0)
     << ", G(2i) err " << std::abs(g2i - std::log(1.0 + std::sqrt(2.0))) << ", symmetry " << sym << ", invariance "
     << inv;
  return {std::abs(cap0 - 1.0) <= tol::cap_interval && std::abs(cap1 - std::sqrt(3.0) / 2.0) <= tol::cap_two_band &&
              std::abs(g2i - std::log(1.0 + std::sqrt(2.0))) <= tol::green_2i && sym <= tol::green_invariance &&
              inv <= tol::green_invariance,
          os.str()};
}

Result c6() {
  const Discriminant d = fit_discriminant(two_band_set());
  const double fit = std::max({std::abs(d.lambda(1) - 4.0), std::abs(d.lambda(2) - 2.0), std::abs(d.d()),
                               std::abs(d.zeros().at(0))});
  const PoleSequence c = d.poles();
  double res = 0.0;
  for (int k = 1; k <= 2; ++k) res = std::max(res, oracle::relative(d.lambda(k), gamma_lambda(two_band_green(), c, k).lambda));
  double ends = 0.0;
  for (double r : d.endpoint_residuals()) ends = std::max(ends, std::abs(r));
  std::ostringstream os;
  os << "(lambda_1, lambda_2, d, c_1) = (" << d.lambda(1) << ", " << d.lambda(2) << ", " << d.d() << ", " << d.zeros()[0]
     << "), residue rel " << res << ", endpoint err " << ends;
  return {fit <= tol::discriminant_abs && res <= tol::residue_rel && ends <= tol::endpoint_abs, os.str()};
}

Result c7() {
  const GmpFamily& fam = two_band200();
  const KappaSection k = kappa_diagnostic(fam.system, two_band_green());
  const BetaSection b = beta_diagnostic(fam.a, two_band_green());
  double kdev = 0.0;
  std::ostringstream os;
  for (const Trend& t : k.per_class) {
    kdev = std::max(kdev, std::abs(t.deviation));
    os << "class n=" << t.index.back() << ": " << t.last << " vs " << t.target << "; ";
  }
  os << "beta product " << b.trend.last << " vs " << b.trend.target << "; ";

  std::vector<double> a, bb;
  for (int l = 1; l <= 60; ++l) {
    a.push_back(std::exp(-std::sqrt(double(l))));
    bb.push_back(0.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(JacobiMatrix(a, bb).truncation(60));
  std::vector<Atom> atoms;
  for (int i = 0; i < 60; ++i) atoms.push_back({ExtendedReal(es.eigenvalues()(i)), std::pow(es.eigenvectors()(0, i), 2)});
  PrecisionPolicy p;
  p.truncate_on_rank_loss = true;
  const OrthoSystem s = orthonormalize(Measure::atomic(atoms), at_infinity(), 30, p);
  const GMPMatrix gm = build_gmp(s);
  const RegularityReport r = assess(s, &gm, GreenEvaluator(FiniteGapSet({{-2.0, 2.0}})));
  os << "decaying Jacobi: " << to_string(r.verdict);
  return {fam.system.precision_bits() >= 256 && fam.system.n_max() == 200 && kdev <= tol::regularity_abs &&
              std::abs(b.trend.deviation) <= tol::regularity_abs && r.verdict == Verdict::Inconsistent,
          os.str()};
}

Result c8() {
  const GreenEvaluator g0(FiniteGapSet({{-2.0, 2.0}}));
  const GrowthSection s0 = green_growth_check(arcsine40(), g0, default_growth_grid(g0.set()));
  const GrowthSection s1 = green_growth_check(two_band200().system, two_band_green(), default_growth_grid(two_band_set()));
  const BetaSection b0 = beta_diagnostic(build_gmp(arcsine40()), g0);
  const BetaSection b1 = beta_diagnostic(two_band200().a, two_band_green());
  const double growth = std::min(s0.lower_bound_slack, s1.lower_bound_slack);
  const double product = std::min(b0.upper_bound_slack, b1.upper_bound_slack);
  std::ostringstream os;
  os << "growth slack " << growth << " on " << s0.points.size() << "+" << s1.points.size() << " points, product slack "
     << product;
  return {s0.points.size() == 20 && s1.points.size() == 20 && growth >= tol::growth_slack && product >= tol::product_slack,
          os.str()};
}

Result c9() {
  const OrthoSystem s = orthonormalize(Measure::arcsine({-2.0, 2.0}), at_infinity(), 50);
  const ZeroDistSection z0 = zero_dist_diagnostic(s, Measure::arcsine({-2.0, 2.0}), {50});
  const GmpFamily& fam = two_band200();
  const ZeroDistSection z1 = zero_dist_diagnostic(fam.system, rho_EC(two_band_green(), fam.system.poles()), {25, 50, 100, 150, 200});
  std::ostringstream os;
  os << "Chebyshev n=50 distance " << z0.distance[0] << "; two-band zero counts";
  for (std::size_t i = 0; i < z1.n.size(); ++i) os << ' ' << z1.zero_count[i] << '/' << z1.n[i];
  return {z0.distance[0] <= tol::zero_cdf && z1.mass_bound_ok, os.str()};
}

Result c10() {
  const Discriminant d0 = fit_discriminant(FiniteGapSet({{-2.0, 2.0}}));
  const Measure semicircle = Measure::chebyshev_type(FiniteGapSet({{-2.0, 2.0}}), {-2.0, 2.0});
  const MagicResidual m = magic_residual(apply_to_gmp(d0, build_family(semicircle, at_infinity(), 40)));
  double block = 0.0;
  for (int l = m.first; l <= m.last; ++l) block = std::max(block, m.block_contribution[l]);
  const PeriodicGmp free = magic_solve(d0, Eigen::VectorXd::Constant(1, 0.6), Eigen::VectorXd::Constant(1, 0.4));
  const double free_err = std::max(std::abs(free.p(0) - 1.0), std::abs(free.q(0)));
  const Discriminant d1 = fit_discriminant(two_band_set());
  const PeriodicGmp two = magic_solve(d1, Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Zero(2));
  double ll = 0.0;
  for (double x : two.lambda_big_lambda) ll = std::max(ll, std::abs(x - 1.0));
  std::ostringstream os;
  os << "free Jacobi max block " << block << " over " << (m.last - m.first + 1) << " blocks, magic_solve (a, b) err "
     << free_err << ", two-band |lambda Lambda - 1| " << ll;
  return {m.last >= m.first && block <= tol::magic_block && free_err <= tol::magic_free && ll <= tol::magic_lambda,
          os.str()};
}

Result c11() {
  const auto t0 = clock_type::now();
  const int horizon = 40;
  std::vector<double> a, b;
  for (int m = 1; m <= 10000 + horizon + 1; ++m) {
    a.push_back(1.0 + 1.0 / m);
    b.push_back(0.0);
  }
  const JacobiMatrix j(a, b);
  const TorusSampleSet t = TorusSampleSet::free_type(FiniteGapSet({{-2.0, 2.0}}), horizon);
  std::vector<double> avg;
  for (int n : {100, 1000, 10000}) avg.push_back(cesaro_stat(j, t, n, horizon).l1);
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << "averages " << avg[0] << ", " << avg[1] << ", " << avg[2] << "; " << dt << " s";
  return {avg[2] <= tol::cesaro_avg && avg[0] > avg[1] && avg[1] > avg[2] && dt <= tol::runtime_c11, os.str()};
}

Result c12() {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  std::ostringstream os;
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::AtomicCase c = oracle::random_atomic(rng);
    const auto ref = oracle::brute_force(c);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < c.x.size(); ++i) atoms.push_back({ExtendedReal(c.x[i]), c.w[i]});
    std::vector<ExtendedReal> poles;
    for (const auto& p : c.poles) poles.push_back(p ? ExtendedReal(*p) : ExtendedReal::infinity());
    const OrthoSystem s = orthonormalize(Measure::atomic(atoms), PoleSequence(poles), c.n_max);
    if (s.n_max() != c.n_max) return {false, "main path truncated an oracle instance"};
    for (int n = 0; n <= c.n_max; ++n) {
      worst = std::max(worst, oracle::relative(s.kappa(n), ref.kappa[n]));
      double scale = 0.0;
      for (int l = 0; l <= n; ++l) scale = std::max(scale, std::abs(static_cast<double>(ref.t[n][l])));
      for (int l = 0; l <= n; ++l)
        worst = std::max(worst, std::abs(s.coefficient(n, l) - static_cast<double>(ref.t[n][l])) / scale);
    }
    os << "(" << c.x.size() << " atoms, g=" << c.poles.size() - 1 << ", N=" << c.n_max << ") ";
  }
  os << "max relative error " << worst;
  return {worst <= tol::oracle_rel, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"Chebyshev leading coefficients", c1},
      {"Moebius covariance", c2},
      {"Lambda_n kappa_{n+g+1} = kappa_n", c3},
      {"GMP structure", c4},
      {"potential theory references", c5},
      {"discriminant cross-validation", c6},
      {"regularity detection", c7},
      {"universal lower bounds", c8},
      {"zero distribution", c9},
      {"magic formula", c10},
      {"Cesaro-Nevai averages", c11},
      {"oracle equivalence", c12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += r.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
