#include "ratgmp/orf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include "ratgmp/linalg.hpp"
#include "ratgmp/precision.hpp"

namespace ratgmp {

namespace detail {

struct CoefficientStore {
  std::variant<DenseMatrix<double>, DenseMatrix<real128>, DenseMatrix<real256>, DenseMatrix<real512>,
               DenseMatrix<real768>, DenseMatrix<real1024>>
      t;
};

}  // namespace detail

namespace {

template <class Real>
struct Outcome {
  PrecisionAttempt attempt;
  DenseMatrix<Real> t;
  Eigen::MatrixXd phi;
  int n = 0;
};

template <class Real>
DenseMatrix<Real> leading_block(const DenseMatrix<Real>& t, int size) {
  DenseMatrix<Real> out(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j <= i; ++j) out(i, j) = t(i, j);
  return out;
}

double defect_of(const Eigen::MatrixXd& phi) {
  const Eigen::MatrixXd g = phi.transpose() * phi;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

template <class Real>
Outcome<Real> attempt_at(const NodeSet<Real>& nodes, const PoleSequence& c, int n_max,
                         const PrecisionPolicy& policy, bool allow_truncate) {
  Outcome<Real> out;
  out.attempt.bits = nominal_bits<Real>();
  const auto v = kernels::basis_matrix(nodes, c, n_max, policy.exec);
  const auto g = kernels::gram(v, nodes.w, policy.exec);
  auto chol = jacobi_scaled_cholesky_inverse(g);
  const double eps = to_double(machine_epsilon<Real>());

  // Largest n whose leading block has eps * cond within budget, with
  // cond(G_s) <= |L_s^{-1}|_F^2 since the scaled diagonal is one.
  int reliable = -1;
  double running_min = 1.0;
  double cond = 0.0;
  for (int j = 0; j < chol.rank; ++j) {
    const double d = to_double(chol.scaled_pivots[j]);
    cond += chol.inverse_row_norm2[j];
    if (!(d > 0.0) || !std::isfinite(cond) || eps * cond > policy.pivot_budget) break;
    running_min = std::min(running_min, d);
    reliable = j;
    out.attempt.condition_estimate = cond;
  }
  out.attempt.reliable_n = reliable;
  out.attempt.rank = chol.rank;
  double full_min = 1.0;
  for (const auto& d : chol.scaled_pivots) full_min = std::min(full_min, to_double(d));
  out.attempt.min_scaled_pivot = chol.rank == n_max + 1 ? full_min : 0.0;

  int size = n_max + 1;
  if (reliable < n_max) {
    std::ostringstream os;
    os << "condition budget exceeded: reliable up to n = " << reliable << " of " << n_max;
    out.attempt.reason = os.str();
    if (!allow_truncate || reliable < 0) return out;
    size = reliable + 1;
  }
  out.t = size == chol.rank ? std::move(chol.t) : leading_block(chol.t, size);
  out.phi = kernels::weighted_projection(v, nodes.w, out.t, policy.exec);
  out.attempt.orthonormality_defect = defect_of(out.phi);
  out.n = size - 1;
  if (out.attempt.orthonormality_defect > policy.orthonormality_tol) {
    std::ostringstream os;
    os << "orthonormality defect " << out.attempt.orthonormality_defect << " above tolerance";
    out.attempt.reason = os.str();
    return out;
  }
  if (size == n_max + 1) out.attempt.reason.clear();
  out.attempt.min_scaled_pivot = running_min;
  out.attempt.accepted = true;
  return out;
}

template <class Real>
void real_complex_eval(const DenseMatrix<Real>& t, const PoleSequence& c, int n, double zr, double zi,
                       Real& out_re, Real& out_im) {
  const int p = c.period();
  const Real xr(zr), xi(zi);
  Real sum_re = t(n, 0), sum_im = Real(0);
  for (int k = 1; k <= p; ++k) {
    if (k > n) break;
    Real ur, ui;
    const ExtendedReal& ck = c.pole(k);
    if (ck.is_infinite()) {
      ur = xr;
      ui = xi;
    } else {
      const Real dr = Real(ck.value()) - xr;
      const Real di = -xi;
      const Real den = dr * dr + di * di;
      if (den == 0) throw DomainError("orthonormal function evaluated at a finite pole");
      ur = dr / den;
      ui = -di / den;
    }
    const int jmax = (n - k) / p;
    Real sr = Real(0), si = Real(0);
    for (int j = jmax; j >= 0; --j) {
      sr += t(n, j * p + k);
      const Real nr = sr * ur - si * ui;
      const Real ni = sr * ui + si * ur;
      sr = nr;
      si = ni;
    }
    sum_re += sr;
    sum_im += si;
  }
  out_re = sum_re;
  out_im = sum_im;
}

}  // namespace

OrthoSystem orthonormalize(const Measure& mu, const PoleSequence& c, int n_max, const PrecisionPolicy& policy) {
  if (n_max < 0) throw ConfigError("N must be nonnegative");
  if (policy.start_bits > policy.max_bits) throw ConfigError("start precision exceeds maximum precision");
  if (policy.nodes_per_band < 1) throw ConfigError("node budget must be positive");
  c.validate_for(mu);

  int target_n = n_max;
  if (auto s = mu.finite_support_size(); s && *s <= static_cast<std::size_t>(n_max)) {
    if (!policy.truncate_on_rank_loss) {
      std::ostringstream os;
      os << "measure has " << *s << " support points; N must be below that";
      throw NumericalFailure(os.str());
    }
    target_n = static_cast<int>(*s) - 1;
  }

  std::vector<int> tiers;
  for (int t : kPrecisionTiers)
    if (t >= tier_for_bits(policy.start_bits) && t <= policy.max_bits) tiers.push_back(t);
  if (tiers.empty()) throw ConfigError("no precision tier within the requested range");

  OrthoSystem sys;
  sys.mu_ = mu;
  sys.c_ = c;
  sys.requested_n_ = n_max;
  sys.nodes_per_band_ = policy.nodes_per_band;

  bool done = false;
  for (std::size_t ti = 0; ti < tiers.size() && !done; ++ti) {
    if (!sys.attempts_.empty()) {
      // log cond grows about linearly in n; skip tiers that cannot reach N.
      const auto& prev = sys.attempts_.back();
      if (prev.reliable_n >= 16 && prev.condition_estimate > 1.0) {
        const double need = std::log2(prev.condition_estimate) * (target_n + 1) / (prev.reliable_n + 1) +
                            std::log2(1.0 / policy.pivot_budget) + 10.0;
        while (ti + 1 < tiers.size() && tiers[ti] < need) ++ti;
      }
    }
    const bool last = ti + 1 == tiers.size();
    dispatch_precision(tiers[ti], [&]<class Real>() {
      const NodeSet<Real> nodes = mu.discretize<Real>(policy.nodes_per_band);
      Outcome<Real> o = attempt_at<Real>(nodes, c, target_n, policy, last && policy.truncate_on_rank_loss);
      sys.attempts_.push_back(o.attempt);
      if (!o.attempt.accepted) return;
      done = true;
      sys.bits_ = o.attempt.bits;
      sys.n_ = o.n;
      sys.defect_ = o.attempt.orthonormality_defect;
      sys.min_pivot_ = o.attempt.min_scaled_pivot;
      sys.kappa_.resize(o.n + 1);
      for (int i = 0; i <= o.n; ++i) sys.kappa_[i] = to_double(o.t(i, i));
      sys.phi_ = std::move(o.phi);
      sys.nodes_.clear();
      sys.weights_.clear();
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        sys.nodes_.push_back(nodes.at_infinity[i] ? ExtendedReal::infinity() : ExtendedReal(to_double(nodes.x[i])));
        sys.weights_.push_back(to_double(nodes.w[i]));
      }
      auto store = std::make_shared<detail::CoefficientStore>();
      store->t = std::move(o.t);
      sys.coeffs_ = std::move(store);
    });
  }
  if (!done) {
    std::ostringstream os;
    os << "orthonormalization failed up to " << tiers.back() << " bits";
    if (!sys.attempts_.empty()) os << ": " << sys.attempts_.back().reason;
    throw NumericalFailure(os.str());
  }
  return sys;
}

double OrthoSystem::coefficient(int n, int l) const {
  if (n < 0 || n > n_ || l < 0 || l > n_) throw ConfigError("coefficient index out of range");
  return std::visit([&](const auto& t) { return to_double(t(n, l)); }, coeffs_->t);
}

std::complex<double> OrthoSystem::evaluate(int n, std::complex<double> z) const {
  if (n < 0 || n > n_) throw ConfigError("function index out of range");
  return std::visit(
      [&](const auto& t) {
        using Real = std::decay_t<decltype(t(0, 0))>;
        Real re, im;
        real_complex_eval(t, c_, n, z.real(), z.imag(), re, im);
        return std::complex<double>(to_double(re), to_double(im));
      },
      coeffs_->t);
}

double OrthoSystem::log_abs(int n, std::complex<double> z) const {
  if (n < 0 || n > n_) throw ConfigError("function index out of range");
  return std::visit(
      [&](const auto& t) {
        using Real = std::decay_t<decltype(t(0, 0))>;
        Real re, im;
        real_complex_eval(t, c_, n, z.real(), z.imag(), re, im);
        const Real m2 = re * re + im * im;
        if (m2 == 0) return -std::numeric_limits<double>::infinity();
        using std::log;
        return to_double(Real(log(m2) / 2));
      },
      coeffs_->t);
}

Eigen::MatrixXd OrthoSystem::multiplication(const std::function<double(const ExtendedReal&)>& f,
                                            kernels::Exec exec) const {
  std::vector<double> fv(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    fv[i] = f(nodes_[i]);
    if (!std::isfinite(fv[i])) throw DomainError("multiplier is not finite on the support");
  }
  return kernels::multiplication_matrix(phi_, fv, exec);
}

// ---- zeros ----

namespace {

double circle_angle(const ExtendedReal& x) {
  return x.is_infinite() ? std::numbers::pi : 2.0 * std::atan(x.value());
}

// Components of the complement of supp mu on the circle, found by angle.
class GapMap {
 public:
  explicit GapMap(const Measure& mu) {
    const double pi = std::numbers::pi;
    std::vector<std::pair<double, double>> cover;
    auto add_arc = [&](const ExtendedReal& from, const ExtendedReal& to) {
      const double a = circle_angle(from);
      const double b = circle_angle(to);
      if (from.is_infinite()) {
        cover.push_back({-pi, b});
      } else if (to.is_infinite()) {
        cover.push_back({a, pi});
      } else if (a <= b) {
        cover.push_back({a, b});
      } else {
        cover.push_back({a, pi});
        cover.push_back({-pi, b});
      }
    };
    for (const auto& a : mu.atoms()) add_arc(a.position, a.position);
    for (const auto& p : mu.parts()) {
      const auto arc = p.support();
      add_arc(arc.from, arc.to);
    }
    std::sort(cover.begin(), cover.end());
    for (const auto& iv : cover) {
      if (!merged_.empty() && iv.first <= merged_.back().second)
        merged_.back().second = std::max(merged_.back().second, iv.second);
      else
        merged_.push_back(iv);
    }
  }

  // -1 on the support; otherwise an id shared by all points of one component.
  int id(double phi) const {
    const std::size_t m = merged_.size();
    for (std::size_t i = 0; i < m; ++i)
      if (phi >= merged_[i].first && phi <= merged_[i].second) return -1;
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (phi > merged_[i].second && phi < merged_[i + 1].first) return static_cast<int>(i) + 1;
    return 0;  // the component through the angle pi
  }

 private:
  std::vector<std::pair<double, double>> merged_;
};

}  // namespace

ZeroSet zeros(const OrthoSystem& sys, int n, double cancellation_tol) {
  if (n < 0 || n > sys.n_max()) throw ConfigError("zero index out of range");
  ZeroSet zs;
  zs.n = n;
  if (n == 0) return zs;
  const PoleSequence& c = sys.poles();
  const int k = c.slot_of(n);
  const ExtendedReal own = c.pole(k);
  const MoebiusMap f = own.is_infinite() ? MoebiusMap::identity() : MoebiusMap::pole_to_infinity(own.value());
  const MoebiusMap finv = invert(f);

  const auto& phi = sys.node_values();
  const auto& nodes = sys.nodes();
  std::vector<double> fv(nodes.size());
  double frame_scale = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExtendedReal y = f.apply(nodes[i]);
    if (y.is_infinite()) throw DomainError("own pole lies on the support");
    fv[i] = y.value();
    frame_scale = std::max(frame_scale, std::abs(fv[i]));
  }
  const Eigen::MatrixXd block = phi.leftCols(n);
  const Eigen::MatrixXd m = kernels::multiplication_matrix(block, fv, kernels::Exec::Serial);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigenvalue iteration did not converge");

  std::vector<double> other_images;
  for (int l = 1; l <= c.period(); ++l)
    if (l != k) {
      const ExtendedReal y = f.apply(c.pole(l));
      if (y.is_finite()) other_images.push_back(y.value());
    }
  const double tol = cancellation_tol * std::max(frame_scale, 1e-300);
  std::vector<double> kept;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    bool cancel = false;
    for (double y : other_images) {
      const double dist = std::abs(lam - y);
      if (dist < tol) cancel = true;
      if (dist >= 1e-2 * tol && dist <= 1e2 * tol) zs.borderline.push_back(finv.apply(ExtendedReal(lam)));
    }
    if (cancel) zs.cancelled.push_back(finv.apply(ExtendedReal(lam)));
    else kept.push_back(lam);
  }
  // A frame eigenvalue at f(infinity) is a zero at infinity.
  const ExtendedReal f_inf = f.apply(ExtendedReal::infinity());
  for (double lam : kept) {
    if (f_inf.is_finite() && std::abs(lam - f_inf.value()) <= 1e-13 * std::max(frame_scale, 1.0))
      zs.zeros.push_back(ExtendedReal::infinity());
    else
      zs.zeros.push_back(finv.apply(ExtendedReal(lam)));
  }
  std::sort(zs.zeros.begin(), zs.zeros.end(), [](const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return a.value() < b.value();
  });
  zs.degree = static_cast<int>(zs.zeros.size());
  return zs;
}

ZeroCheck check_zero_invariants(const ZeroSet& zs, const OrthoSystem& sys) {
  ZeroCheck chk;
  std::ostringstream os;
  const int g = sys.genus();
  if (zs.degree < zs.n - g || zs.degree > zs.n) {
    chk.count_in_range = false;
    os << "degree " << zs.degree << " outside [" << zs.n - g << ", " << zs.n << "]; ";
  }
  for (std::size_t i = 1; i < zs.zeros.size(); ++i) {
    if (zs.zeros[i].is_infinite() || zs.zeros[i - 1].is_infinite()) continue;
    const double a = zs.zeros[i - 1].value();
    const double b = zs.zeros[i].value();
    if (!(b - a > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))) {
      chk.simple = false;
      os << "zeros " << a << " and " << b << " coincide; ";
    }
  }
  if (zs.n > 0) {
    const GapMap gaps(sys.measure());
    std::vector<int> ids;
    for (const auto& z : zs.zeros) {
      const int id = gaps.id(circle_angle(z));
      if (id < 0) continue;
      if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
        chk.one_per_gap = false;
        os << "two zeros in one gap near " << z << "; ";
      }
      ids.push_back(id);
    }
    const int own = gaps.id(circle_angle(sys.poles().pole(sys.poles().slot_of(zs.n))));
    if (std::find(ids.begin(), ids.end(), own) != ids.end()) {
      chk.own_gap_empty = false;
      os << "zero in the gap holding the own pole; ";
    }
  }
  chk.detail = os.str();
  return chk;
}

std::vector<Atom> counting_measure(const ZeroSet& zs) {
  if (zs.n < 1) throw ConfigError("counting measure needs n >= 1");
  std::vector<Atom> out;
  for (const auto& z : zs.zeros) out.push_back({z, 1.0 / zs.n});
  return out;
}

double growth_exponent(const OrthoSystem& sys, int n, std::complex<double> z) {
  if (n < 1) throw ConfigError("growth exponent needs n >= 1");
  return sys.log_abs(n, z) / n;
}

}  // namespace ratgmp
