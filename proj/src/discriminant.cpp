#include "ratgmp/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "ratgmp/errors.hpp"

namespace ratgmp {

Discriminant::Discriminant(FiniteGapSet e, Data data) : e_(std::move(e)), data_(std::move(data)) {
  const int g = e_.genus();
  if (static_cast<int>(data_.lambdas.size()) != g + 1 || static_cast<int>(data_.zeros.size()) != g)
    throw ConfigError("discriminant data does not match the genus");
  for (double l : data_.lambdas)
    if (!(l > 0.0)) throw InvariantViolation("discriminant lambdas must be positive");
  const auto gaps = e_.gaps();
  for (int k = 0; k < g; ++k)
    if (!(data_.zeros[k] > gaps[k].lo && data_.zeros[k] < gaps[k].hi))
      throw InvariantViolation("discriminant pole outside its gap");
}

PoleSequence Discriminant::poles() const {
  std::vector<ExtendedReal> pts;
  for (double c : data_.zeros) pts.emplace_back(c);
  pts.push_back(ExtendedReal::infinity());
  return PoleSequence(std::move(pts));
}

std::complex<double> Discriminant::operator()(std::complex<double> z) const {
  std::complex<double> v = data_.lambdas.back() * z + data_.d;
  for (std::size_t k = 0; k < data_.zeros.size(); ++k) v += data_.lambdas[k] / (data_.zeros[k] - z);
  return v;
}

double Discriminant::operator()(double x) const {
  double v = data_.lambdas.back() * x + data_.d;
  for (std::size_t k = 0; k < data_.zeros.size(); ++k) v += data_.lambdas[k] / (data_.zeros[k] - x);
  return v;
}

double Discriminant::derivative(double x) const {
  double v = data_.lambdas.back();
  for (std::size_t k = 0; k < data_.zeros.size(); ++k) {
    const double r = data_.zeros[k] - x;
    v += data_.lambdas[k] / (r * r);
  }
  return v;
}

std::vector<double> Discriminant::endpoint_residuals() const {
  std::vector<double> out;
  const auto ends = e_.endpoints();
  for (std::size_t i = 0; i < ends.size(); ++i) out.push_back((*this)(ends[i]) - (i % 2 == 0 ? -2.0 : 2.0));
  return out;
}

namespace {

// Unknowns: (lambda_{g+1}, d, lambda_1..lambda_g, c_1..c_g).
struct EndpointSystem {
  std::vector<double> ends;
  int g;

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd f(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
      const double z = ends[i];
      double v = x(0) * z + x(1);
      for (int k = 0; k < g; ++k) v += x(2 + k) / (x(2 + g + k) - z);
      f(i) = v - (i % 2 == 0 ? -2.0 : 2.0);
    }
    return f;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd jac(ends.size(), 2 * g + 2);
    for (std::size_t i = 0; i < ends.size(); ++i) {
      const double z = ends[i];
      jac(i, 0) = z;
      jac(i, 1) = 1.0;
      for (int k = 0; k < g; ++k) {
        const double r = x(2 + g + k) - z;
        jac(i, 2 + k) = 1.0 / r;
        jac(i, 2 + g + k) = -x(2 + k) / (r * r);
      }
    }
    return jac;
  }
};

bool admissible(const Eigen::VectorXd& x, int g, const std::vector<Interval>& gaps) {
  if (!(x(0) > 0.0)) return false;
  for (int k = 0; k < g; ++k) {
    if (!(x(2 + k) > 0.0)) return false;
    if (!(x(2 + g + k) > gaps[k].lo && x(2 + g + k) < gaps[k].hi)) return false;
  }
  return x.allFinite();
}

}  // namespace

Discriminant fit_discriminant(const FiniteGapSet& e, const FitOptions& opt) {
  const int g = e.genus();
  const auto gaps = e.gaps();
  const GreenEvaluator ge(e, opt.nodes);

  std::vector<ExtendedReal> mids;
  for (const auto& gp : gaps) mids.emplace_back(gp.mid());
  mids.push_back(ExtendedReal::infinity());
  const PoleSequence cmid(mids);

  Eigen::VectorXd x(2 * g + 2);
  x(0) = gamma_lambda(ge, cmid, g + 1).lambda;
  for (int k = 0; k < g; ++k) {
    x(2 + k) = gamma_lambda(ge, cmid, k + 1).lambda;
    x(2 + g + k) = gaps[k].mid();
  }
  const EndpointSystem sys{e.endpoints(), g};
  x(1) = 0.0;
  x(1) = -2.0 - (sys.residual(x)(0) - 2.0);  // Delta(left end) = -2

  Eigen::VectorXd f = sys.residual(x);
  double fn = f.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < opt.max_iterations && fn > opt.tolerance; ++it) {
    const Eigen::VectorXd step = sys.jacobian(x).fullPivLu().solve(-f);
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      const Eigen::VectorXd trial = x + t * step;
      if (admissible(trial, g, gaps)) {
        const Eigen::VectorXd ft = sys.residual(trial);
        const double ftn = ft.lpNorm<Eigen::Infinity>();
        if (ftn < fn) {
          x = trial;
          f = ft;
          fn = ftn;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  if (!(fn <= 1e-10))
    throw NumericalFailure("discriminant Newton did not converge, endpoint residual " + std::to_string(fn));

  Discriminant::Data data;
  for (int k = 0; k < g; ++k) {
    data.lambdas.push_back(x(2 + k));
    data.zeros.push_back(x(2 + g + k));
  }
  data.lambdas.push_back(x(0));
  data.d = x(1);
  Discriminant delta(e, std::move(data));
  delta.newton_iterations = it;

  // Residues at the fitted poles against the potential-theory constants.
  const PoleSequence c = delta.poles();
  double worst = 0.0;
  for (int k = 1; k <= g + 1; ++k) {
    const double lp = gamma_lambda(ge, c, k).lambda;
    worst = std::max(worst, std::abs(delta.lambda(k) / lp - 1.0));
  }
  delta.residue_cross_check = worst;
  if (worst > opt.cross_check_tol)
    throw InvariantViolation("discriminant residues disagree with potential-theory lambdas, relative " +
                             std::to_string(worst));
  return delta;
}

PreimageCheck check_preimage(const Discriminant& delta, int m) {
  const FiniteGapSet& e = delta.set();
  PreimageCheck out;
  out.min_outside_abs = std::numeric_limits<double>::infinity();
  for (const auto& b : e.bands())
    for (int i = 0; i <= m; ++i) {
      const double x = b.mid() - b.half() * std::cos(std::numbers::pi * i / m);
      out.max_band_excess = std::max(out.max_band_excess, std::abs(delta(x)) - 2.0);
    }
  auto outside = [&](double x) { out.min_outside_abs = std::min(out.min_outside_abs, std::abs(delta(x))); };
  for (const auto& gp : e.gaps())
    for (int i = 1; i < m; ++i) outside(gp.lo + gp.width() * i / m);
  for (int i = 1; i <= m; ++i) {
    outside(e.lower() - 2.0 * e.diameter() * i / m);
    outside(e.upper() + 2.0 * e.diameter() * i / m);
  }
  return out;
}

double ahlfors_abs(const GreenEvaluator& ge, const Discriminant& delta, std::complex<double> z) {
  const PoleSequence c = delta.poles();
  double s = 0.0;
  for (const auto& w : c.points()) s += ge.green(z, w);
  return std::exp(-s);
}

BlockJacobi apply_to_gmp(const Discriminant& delta, const GmpFamily& fam, double type3_tol, double det_tol) {
  const int g = delta.genus();
  const int s = g + 1;
  const PoleSequence& c = fam.a.poles();
  if (c.period() != s || c.infinity_slot() != s)
    throw ConfigError("apply_to_gmp needs poles (c_1, ..., c_g, infinity)");
  for (int k = 1; k <= g; ++k)
    if (std::abs(c.pole(k).value() - delta.zeros()[k - 1]) > 1e-9 * delta.set().scale())
      throw ConfigError("GMP poles are not the discriminant zeros");

  Eigen::MatrixXd j = delta.lambdas().back() * fam.a.dense();
  j.diagonal().array() += delta.d();
  for (int k = 1; k <= g; ++k) j += delta.lambda(k) * fam.for_slot(k).dense();

  BlockJacobi out;
  const int nb = static_cast<int>(j.rows()) / s;
  const double norm = j.cwiseAbs().rowwise().sum().maxCoeff();
  for (int b = 0; b < nb; ++b) {
    Eigen::MatrixXd w = j.block(b * s, b * s, s, s);
    out.w.push_back(0.5 * (w + w.transpose()));
  }
  for (int b = 0; b + 1 < nb; ++b) {
    const Eigen::MatrixXd v = j.block(b * s, (b + 1) * s, s, s);
    for (int r = 0; r < s; ++r)
      for (int col = r + 1; col < s; ++col)
        out.type3_defect = std::max(out.type3_defect, std::abs(v(r, col)) / norm);
    const Eigen::MatrixXd lower = v.triangularView<Eigen::Lower>();
    double det = 1.0;
    double expect = 1.0;
    for (int k = 0; k < s; ++k) {
      det *= lower(k, k);
      const int n = b * s + k;
      expect *= delta.lambda(k == 0 ? s : k) * big_lambda(fam, n);
    }
    out.det_v.push_back(det);
    out.det_identity_error = std::max(out.det_identity_error, std::abs(det / expect - 1.0));
    out.v.push_back(lower);
  }
  if (out.type3_defect > type3_tol)
    throw NumericalFailure("Delta(A) is not type 3 block Jacobi, defect " + std::to_string(out.type3_defect));
  if (out.det_identity_error > det_tol)
    throw NumericalFailure("det v_j identity fails, relative " + std::to_string(out.det_identity_error));
  return out;
}

MagicResidual magic_residual(const BlockJacobi& j) {
  MagicResidual out;
  const int nb = static_cast<int>(j.v.size());
  if (nb == 0) return out;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(j.block_size(), j.block_size());
  auto vdev = [&](int l) { return (j.v[l] - id).squaredNorm(); };
  out.first = 0;
  out.last = nb - 1;
  for (int l = 0; l < nb; ++l) {
    const double own = j.w[l].squaredNorm() + vdev(l);
    out.block_contribution.push_back(own);
    out.h_plus += own + (l > 0 ? vdev(l - 1) : 0.0);
  }
  return out;
}

Eigen::MatrixXd PeriodicGmp::b(const std::vector<double>& c) const {
  const int s = static_cast<int>(p.size());
  Eigen::MatrixXd m(s, s);
  for (int a = 0; a < s; ++a)
    for (int bb = 0; bb <= a; ++bb) {
      m(a, bb) = q(a) * p(bb) + (a == bb && a > 0 ? c[a - 1] : 0.0);
      m(bb, a) = m(a, bb);
    }
  return m;
}

Eigen::MatrixXcd periodic_symbol(const PeriodicGmp& a, const std::vector<double>& c, double theta) {
  const int s = static_cast<int>(a.p.size());
  Eigen::MatrixXcd m = a.b(c).cast<std::complex<double>>();
  const std::complex<double> ph = std::polar(1.0, theta);
  for (int r = 0; r < s; ++r) {
    m(r, 0) += a.p(r) * ph;
    m(0, r) += a.p(r) * std::conj(ph);
  }
  return m;
}

namespace {

Eigen::MatrixXcd delta_of(const Discriminant& delta, const Eigen::MatrixXcd& a) {
  const int s = static_cast<int>(a.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s, s);
  Eigen::MatrixXcd out = delta.lambdas().back() * a + delta.d() * id;
  for (int k = 0; k < delta.genus(); ++k)
    out += delta.lambdas()[k] * (delta.zeros()[k] * id - a).partialPivLu().inverse();
  return out;
}

struct MagicFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Discriminant* delta;
  int s;
  int samples;

  int inputs() const { return 2 * s; }
  int values() const { return samples * s * s; }

  PeriodicGmp unpack(const Eigen::VectorXd& x) const {
    PeriodicGmp a;
    a.p = x.head(s);
    a.q = x.tail(s);
    return a;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const PeriodicGmp a = unpack(x);
    int i = 0;
    for (int m = 0; m < samples; ++m) {
      const double th = 2.0 * std::numbers::pi * m / samples;
      Eigen::MatrixXcd r = delta_of(*delta, periodic_symbol(a, delta->zeros(), th));
      r.diagonal().array() -= 2.0 * std::cos(th);
      for (int u = 0; u < s; ++u)
        for (int v = u; v < s; ++v) {
          f(i++) = r(u, v).real();
          if (v > u) f(i++) = r(u, v).imag();
        }
    }
    for (; i < f.size(); ++i) f(i) = 0.0;
    return 0;
  }
};

}  // namespace

PeriodicGmp magic_solve(const Discriminant& delta, const Eigen::VectorXd& p0, const Eigen::VectorXd& q0,
                        double tol) {
  const int s = delta.genus() + 1;
  if (p0.size() != s || q0.size() != s) throw ConfigError("magic_solve seed has the wrong length");
  if (!(p0(0) > 0.0)) throw ConfigError("magic_solve seed needs p_0 > 0");

  MagicFunctor fun{&delta, s, 4 * s};
  Eigen::NumericalDiff<MagicFunctor, Eigen::Central> nd(fun);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<MagicFunctor, Eigen::Central>> lm(nd);
  lm.parameters.ftol = 1e-16;
  lm.parameters.xtol = 1e-16;
  lm.parameters.maxfev = 20000;

  Eigen::VectorXd x(2 * s);
  x << p0, q0;
  int evaluations = 0;
  // A root with p_0 <= 0 is re-seeded once from its componentwise absolute value.
  for (int attempt = 0; attempt < 2; ++attempt) {
    lm.minimize(x);
    evaluations += static_cast<int>(lm.nfev);
    if (x(0) > 0.0) break;
    x = x.cwiseAbs();
  }

  PeriodicGmp out = fun.unpack(x);
  out.evaluations = evaluations;
  Eigen::VectorXd f(fun.values());
  fun(x, f);
  out.residual = f.lpNorm<Eigen::Infinity>();
  if (!(out.residual <= tol))
    throw NumericalFailure("magic_solve did not converge, residual " + std::to_string(out.residual));
  if (!(out.p(0) > 0.0)) throw NumericalFailure("magic_solve converged to a root with p_0 <= 0");

  // Lambda_k: outermost entry of the e^{i theta} coefficient of each resolvent symbol.
  const int samples = fun.samples;
  for (int k = 1; k < s; ++k) {
    std::complex<double> coef = 0.0;
    for (int m = 0; m < samples; ++m) {
      const double th = 2.0 * std::numbers::pi * m / samples;
      const Eigen::MatrixXcd a = periodic_symbol(out, delta.zeros(), th);
      const Eigen::MatrixXcd r =
          (delta.zeros()[k - 1] * Eigen::MatrixXcd::Identity(s, s) - a).partialPivLu().inverse();
      coef += r(k, k) * std::polar(1.0, -th);
    }
    out.lambda_big_lambda.push_back(delta.lambda(k) * (coef / static_cast<double>(samples)).real());
  }
  out.lambda_big_lambda.push_back(delta.lambdas().back() * out.p(0));
  return out;
}

}  // namespace ratgmp
