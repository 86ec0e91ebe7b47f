#include "ratgmp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

namespace ratgmp {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kQuadTol = 1e-14;
constexpr unsigned kMaxDepth = 20;

template <class F>
double gk(F&& f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, kQuadTol);
}

double signed_sqrt_free_product(double s, const std::vector<double>& endpoints, double skip_a, double skip_b) {
  double r = 1.0;
  for (double e : endpoints)
    if (e != skip_a && e != skip_b) r *= (s - e);
  return std::sqrt(std::abs(r));
}

}  // namespace

EquilibriumModel::EquilibriumModel(FiniteGapSet e, int nodes) : e_(std::move(e)), nodes_(nodes) {
  if (nodes_ < 8) throw ConfigError("equilibrium quadrature needs at least 8 nodes");
  endpoints_ = e_.endpoints();
  const int g = e_.genus();
  if (g > 0) {
    const double center = 0.5 * (e_.lower() + e_.upper());
    const double hw = 0.5 * e_.diameter();
    const auto gaps = e_.gaps();
    // Gauss-Chebyshev moments of u^i / sqrt|R without the gap ends| on each gap.
    Eigen::MatrixXd mom(g, g + 1);
    for (int j = 0; j < g; ++j) {
      const Interval& gp = gaps[j];
      std::vector<double> acc(g + 1, 0.0);
      for (int m = 1; m <= nodes_; ++m) {
        const double t = gp.mid() + gp.half() * std::cos(std::numbers::pi * (2 * m - 1) / (2.0 * nodes_));
        const double w = 1.0 / signed_sqrt_free_product(t, endpoints_, gp.lo, gp.hi);
        const double u = (t - center) / hw;
        double up = 1.0;
        for (int i = 0; i <= g; ++i) {
          acc[i] += up * w;
          up *= u;
        }
      }
      for (int i = 0; i <= g; ++i) mom(j, i) = acc[i] * std::numbers::pi / nodes_;
    }
    const Eigen::VectorXd coef = mom.leftCols(g).colPivHouseholderQr().solve(-mom.col(g));
    if (!coef.allFinite()) throw NumericalFailure("gap conditions are singular");
    auto qu = [&](double u) {
      double v = 1.0;
      for (int i = g - 1; i >= 0; --i) v = v * u + coef(i);
      return v;  // monic: u^g + sum c_i u^i, evaluated by Horner with leading 1
    };
    for (const auto& gp : gaps) {
      const double ua = (gp.lo - center) / hw;
      const double ub = (gp.hi - center) / hw;
      const double fa = qu(ua);
      const double fb = qu(ub);
      if (!(fa * fb < 0.0)) throw NumericalFailure("equilibrium numerator has no sign change in a gap");
      std::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
      const auto root = boost::math::tools::toms748_solve(qu, ua, ub, fa, fb, tol, iters);
      zeta_.push_back(center + hw * 0.5 * (root.first + root.second));
    }
  }
  // Robin constant from the abelian integral beyond the rightmost endpoint.
  const double emax = e_.upper();
  const double xr = std::max(emax, 0.0) + e_.diameter();
  double near = 0.0;
  {
    auto f = [&](double u) {
      const double s = emax + u * u;
      return 2.0 * std::abs(q(s)) / signed_sqrt_free_product(s, endpoints_, emax, emax);
    };
    near = gk(f, 0.0, std::sqrt(xr - emax));
  }
  robin_ = near - std::log(xr) + outer_tail(xr);
}

double EquilibriumModel::q(double s) const {
  double v = 1.0;
  for (double z : zeta_) v *= (s - z);
  return v;
}

double EquilibriumModel::q_over_sqrt_r_without(double s, double skip_a, double skip_b) const {
  return q(s) / signed_sqrt_free_product(s, endpoints_, skip_a, skip_b);
}

double EquilibriumModel::outer_tail(double x) const {
  // |q|/sqrt|R| - 1/|s| = expm1(L(s)) / |s| with L built from log1p terms.
  auto f = [&](double s) {
    double l = 0.0;
    for (double z : zeta_) l += std::log1p(-z / s);
    for (double e : endpoints_) l -= 0.5 * std::log1p(-e / s);
    return std::expm1(l) / std::abs(s);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  if (x > 0.0) return integrator.integrate(f, x, std::numeric_limits<double>::infinity(), kQuadTol);
  return integrator.integrate([&](double u) { return f(-u); }, -x, std::numeric_limits<double>::infinity(), kQuadTol);
}

double EquilibriumModel::density(double t) const {
  if (!e_.contains(t)) return 0.0;
  double r = 1.0;
  for (double e : endpoints_) r *= (t - e);
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(q(t)) / (std::numbers::pi * std::sqrt(std::abs(r)));
}

Measure EquilibriumModel::measure() const { return Measure::chebyshev_type(e_, zeta_, nodes_); }

std::vector<double> EquilibriumModel::gap_residuals() const {
  std::vector<double> out;
  for (const auto& gp : e_.gaps()) {
    auto f = [&](double theta) {
      return q_over_sqrt_r_without(gp.mid() + gp.half() * std::cos(theta), gp.lo, gp.hi);
    };
    out.push_back(gk(f, 0.0, std::numbers::pi));
  }
  return out;
}

double EquilibriumModel::gap_green(double x, const Interval& gap) const {
  const bool from_left = x - gap.lo <= gap.hi - x;
  const double a = from_left ? gap.lo : gap.hi;
  const double sigma = from_left ? 1.0 : -1.0;
  auto f = [&](double u) {
    const double s = a + sigma * u * u;
    return 2.0 * q(s) / signed_sqrt_free_product(s, endpoints_, a, a);
  };
  return std::abs(gk(f, 0.0, std::sqrt(std::abs(x - a))));
}

double EquilibriumModel::green(double x) const {
  if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
  if (e_.contains(x)) return 0.0;
  const int gi = e_.gap_index(x);
  if (gi >= 0) return gap_green(x, e_.gaps()[gi]);
  const double diam = e_.diameter();
  if (x > e_.upper()) {
    const double a = e_.upper();
    if (x <= std::max(a, 0.0) + diam) {
      auto f = [&](double u) {
        const double s = a + u * u;
        return 2.0 * std::abs(q(s)) / signed_sqrt_free_product(s, endpoints_, a, a);
      };
      return gk(f, 0.0, std::sqrt(x - a));
    }
    return robin_ + std::log(x) - outer_tail(x);
  }
  const double b = e_.lower();
  if (x >= std::min(b, 0.0) - diam) {
    auto f = [&](double u) {
      const double s = b - u * u;
      return 2.0 * std::abs(q(s)) / signed_sqrt_free_product(s, endpoints_, b, b);
    };
    return gk(f, 0.0, std::sqrt(b - x));
  }
  return robin_ + std::log(std::abs(x)) - outer_tail(x);
}

double EquilibriumModel::green_upper(std::complex<double> z) const {
  // Re of the abelian integral up the vertical segment from Re z, with t = tau^2.
  const double x0 = z.real();
  const double h = z.imag();
  auto f = [&](double tau) {
    const std::complex<double> s(x0, tau * tau);
    std::complex<double> qs = 1.0;
    for (double zz : zeta_) qs *= (s - zz);
    std::complex<double> root = 1.0;
    for (double e : endpoints_) root *= std::sqrt(s - e);
    const std::complex<double> v = qs / root * std::complex<double>(0.0, 2.0 * tau);
    return v.real();
  };
  return green(x0) + gk(f, 0.0, std::sqrt(h));
}

double EquilibriumModel::green(std::complex<double> z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::numeric_limits<double>::infinity();
  if (z.imag() == 0.0) return green(z.real());
  return green_upper(z.imag() > 0.0 ? z : std::conj(z));
}

double EquilibriumModel::log_potential(std::complex<double> z) const {
  Accumulator<double> acc;
  for (const auto& b : e_.bands()) {
    auto f = [&](double theta) {
      const double t = b.mid() + b.half() * std::cos(theta);
      return std::log(std::abs(z - t)) * std::abs(q(t)) /
             (std::numbers::pi * signed_sqrt_free_product(t, endpoints_, b.lo, b.hi));
    };
    if (z.imag() == 0.0 && b.contains(z.real())) {
      const double th = std::acos(std::clamp((z.real() - b.mid()) / b.half(), -1.0, 1.0));
      boost::math::quadrature::tanh_sinh<double> ts;
      if (th > 0.0) acc.add(ts.integrate(f, 0.0, th, kQuadTol));
      if (th < std::numbers::pi) acc.add(ts.integrate(f, th, std::numbers::pi, kQuadTol));
    } else {
      acc.add(gk(f, 0.0, std::numbers::pi));
    }
  }
  return acc.value();
}

std::pair<double, double> capacity_robin(const FiniteGapSet& e) {
  const EquilibriumModel m(e);
  return {m.capacity(), m.robin()};
}

EquilibriumModel equilibrium(const FiniteGapSet& e, int nodes) { return EquilibriumModel(e, nodes); }

// ---- GreenEvaluator ----

GreenEvaluator::GreenEvaluator(FiniteGapSet e, int nodes) : e_(std::move(e)), nodes_(nodes) {}

std::shared_ptr<const EquilibriumModel> GreenEvaluator::frame(const ExtendedReal& w) const {
  if (e_.contains(w)) throw DomainError("Green function pole lies on the set");
  {
    std::shared_lock lock(mutex_);
    if (w.is_infinite()) {
      if (at_infinity_) return at_infinity_;
    } else if (auto it = finite_.find(w.value()); it != finite_.end()) {
      return it->second;
    }
  }
  std::shared_ptr<const EquilibriumModel> model;
  if (w.is_infinite()) model = std::make_shared<EquilibriumModel>(e_, nodes_);
  else model = std::make_shared<EquilibriumModel>(e_.image(MoebiusMap::pole_to_infinity(w.value())), nodes_);
  std::unique_lock lock(mutex_);
  if (w.is_infinite()) {
    if (!at_infinity_) at_infinity_ = model;
    return at_infinity_;
  }
  return finite_.emplace(w.value(), model).first->second;
}

double GreenEvaluator::green(std::complex<double> z, const ExtendedReal& w) const {
  const auto m = frame(w);
  if (w.is_infinite()) return m->green(z);
  const std::complex<double> den = w.value() - z;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return m->green(1.0 / den);
}

double GreenEvaluator::green(const ExtendedReal& z, const ExtendedReal& w) const {
  if (z == w) return std::numeric_limits<double>::infinity();
  const auto m = frame(w);
  if (w.is_infinite()) return m->green(z.value());
  if (z.is_infinite()) return m->green(0.0);
  return m->green(1.0 / (w.value() - z.value()));
}

double GreenEvaluator::gamma(const ExtendedReal& w) const { return frame(w)->robin(); }

Measure GreenEvaluator::harmonic_measure(const ExtendedReal& w) const {
  const auto m = frame(w);
  if (w.is_infinite()) return m->measure();
  return m->measure().pushforward(invert(MoebiusMap::pole_to_infinity(w.value())));
}

double green(const FiniteGapSet& e, std::complex<double> z, const ExtendedReal& w) {
  return GreenEvaluator(e).green(z, w);
}

double green(const FiniteGapSet& e, const ExtendedReal& z, const ExtendedReal& w) {
  return GreenEvaluator(e).green(z, w);
}

GammaLambda gamma_lambda(const GreenEvaluator& ge, const PoleSequence& c, int k) {
  if (k < 1 || k > c.period()) throw ConfigError("pole slot out of range");
  for (const auto& p : c.points())
    if (ge.set().contains(p)) throw DomainError("a pole lies on the finite gap set");
  GammaLambda out;
  out.gamma = ge.gamma(c.pole(k));
  out.log_lambda = out.gamma;
  for (int l = 1; l <= c.period(); ++l)
    if (l != k) out.log_lambda += ge.green(c.pole(k), c.pole(l));
  out.lambda = std::exp(out.log_lambda);
  return out;
}

GammaLambda gamma_lambda(const FiniteGapSet& e, const PoleSequence& c, int k) {
  return gamma_lambda(GreenEvaluator(e), c, k);
}

double calG(const GreenEvaluator& ge, const PoleSequence& c, std::complex<double> z) {
  double s = 0.0;
  for (const auto& p : c.points()) s += ge.green(z, p);
  return s / c.period();
}

double calG(const FiniteGapSet& e, const PoleSequence& c, std::complex<double> z) {
  return calG(GreenEvaluator(e), c, z);
}

Measure rho_EC(const GreenEvaluator& ge, const PoleSequence& c) {
  std::vector<std::pair<double, Measure>> parts;
  for (const auto& p : c.points()) parts.emplace_back(1.0, ge.harmonic_measure(p));
  std::vector<SupportArc> ess;
  for (const auto& b : ge.set().bands()) ess.push_back({b.lo, b.hi});
  return Measure::mixture(parts, ess);
}

Measure rho_EC(const FiniteGapSet& e, const PoleSequence& c) { return rho_EC(GreenEvaluator(e), c); }

}  // namespace ratgmp
