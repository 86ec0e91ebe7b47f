#include "ratgmp/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ratgmp/errors.hpp"

namespace ratgmp {

JacobiMatrix::JacobiMatrix(std::vector<double> a_in, std::vector<double> b_in) : a(std::move(a_in)), b(std::move(b_in)) {
  for (double x : a)
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Jacobi off-diagonal entries must be positive and finite");
  for (double x : b)
    if (!std::isfinite(x)) throw DomainError("Jacobi diagonal entries must be finite");
}

Eigen::MatrixXd JacobiMatrix::truncation(int m) const {
  if (m < 1 || m > size() || m - 1 > static_cast<int>(a.size()))
    throw ConfigError("Jacobi truncation exceeds the stored coefficients");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = b[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = a[i];
  }
  return t;
}

JacobiMatrix JacobiMatrix::free(int n) {
  return JacobiMatrix(std::vector<double>(static_cast<std::size_t>(n), 1.0), std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

JacobiMatrix JacobiMatrix::from_gmp(const GMPMatrix& m) {
  if (m.genus() != 0) throw ConfigError("only a g = 0 GMP matrix is a Jacobi matrix");
  std::vector<double> a, b;
  for (int i = 0; i < m.size(); ++i) {
    b.push_back(m(i, i));
    if (i + 1 < m.size()) a.push_back(m(i, i + 1));
  }
  return JacobiMatrix(std::move(a), std::move(b));
}

TorusSampleSet TorusSampleSet::free_type(const FiniteGapSet& e, int length) {
  if (e.genus() != 0) throw ConfigError("free-type torus needs a single interval");
  const Interval band = e.bands().front();
  kernels::JacobiSample s;
  s.a.assign(static_cast<std::size_t>(length), band.width() / 4.0);
  s.b.assign(static_cast<std::size_t>(length), band.mid());
  return {{s}, e, "free-type"};
}

TorusSampleSet TorusSampleSet::symmetric_two_band(const FiniteGapSet& e, int count, int length) {
  if (e.genus() != 1) throw ConfigError("symmetric two-band torus needs two bands");
  const auto bands = e.bands();
  const double alpha = bands[1].lo;
  const double beta = bands[1].hi;
  const double tol = 1e-12 * e.scale();
  if (std::abs(bands[0].lo + beta) > tol || std::abs(bands[0].hi + alpha) > tol || !(alpha > 0.0))
    throw ConfigError("set is not of the form [-beta, -alpha] u [alpha, beta]");
  TorusSampleSet out{{}, e, "symmetric-two-band-period-2"};
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / count;
    const double s = alpha * std::sin(phi);
    const double sum = std::sqrt(beta * beta - s * s);
    const double diff = alpha * std::cos(phi);
    const double a1 = 0.5 * (sum + diff);
    const double a2 = 0.5 * (sum - diff);
    kernels::JacobiSample smp;
    for (int k = 0; k < length; ++k) {
      smp.a.push_back(k % 2 == 0 ? a1 : a2);
      smp.b.push_back(k % 2 == 0 ? s : -s);
    }
    out.samples.push_back(std::move(smp));
  }
  return out;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::ConsistentWithRegular: return "consistent-with-regular";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict combine(const std::vector<Verdict>& vs) noexcept {
  if (vs.empty()) return Verdict::Inconclusive;
  if (std::find(vs.begin(), vs.end(), Verdict::Inconsistent) != vs.end()) return Verdict::Inconsistent;
  if (std::all_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::ConsistentWithRegular; }))
    return Verdict::ConsistentWithRegular;
  return Verdict::Inconclusive;
}

Trend make_trend(std::vector<int> index, std::vector<double> value, double target, const VerdictRule& rule) {
  Trend t;
  t.target = target;
  t.index = std::move(index);
  t.value = std::move(value);
  if (t.value.empty()) return t;
  t.last = t.value.back();
  t.deviation = t.last - target;
  const int m = std::min<int>(rule.tail_points, static_cast<int>(t.value.size()));
  if (m >= 2) {
    Eigen::MatrixXd x(m, 2);
    Eigen::VectorXd y(m);
    const int off = static_cast<int>(t.value.size()) - m;
    for (int i = 0; i < m; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = 1.0 / std::max(1, t.index[off + i]);
      y(i) = t.value[off + i];
    }
    t.extrapolated = x.colPivHouseholderQr().solve(y)(0);
  } else {
    t.extrapolated = t.last;
  }
  if (std::abs(t.deviation) <= rule.accept) t.verdict = Verdict::ConsistentWithRegular;
  else if (std::abs(t.deviation) > rule.reject && std::abs(t.extrapolated - target) > rule.reject)
    t.verdict = Verdict::Inconsistent;
  else t.verdict = Verdict::Inconclusive;
  return t;
}

std::vector<std::complex<double>> default_growth_grid(const FiniteGapSet& e) {
  std::vector<std::complex<double>> z;
  const double d = e.diameter();
  const double lo = e.lower() - 0.25 * d;
  const double hi = e.upper() + 0.25 * d;
  for (double h : {0.125 * d, 0.375 * d})
    for (int i = 0; i < 10; ++i) z.emplace_back(lo + (hi - lo) * i / 9.0, h);
  return z;
}

namespace {

std::vector<double> lambdas_for(const GreenEvaluator& ge, const PoleSequence& c) {
  std::vector<double> out;
  for (int k = 1; k <= c.period(); ++k) out.push_back(gamma_lambda(ge, c, k).lambda);
  return out;
}

int last_in_class(const PoleSequence& c, int n_max, int k) {
  for (int n = n_max; n >= 1; --n)
    if (c.slot_of(n) == k) return n;
  return -1;
}

}  // namespace

KappaSection kappa_diagnostic(const OrthoSystem& sys, const GreenEvaluator& ge, const RegularityOptions& opt) {
  const PoleSequence& c = sys.poles();
  const int s = c.period();
  KappaSection out;
  out.lambdas = lambdas_for(ge, c);
  out.truncated = sys.truncated();
  out.lower_bound_slack = std::numeric_limits<double>::infinity();
  std::vector<Verdict> vs;
  for (int k = 1; k <= s; ++k) {
    std::vector<int> idx;
    std::vector<double> val;
    for (int n = k; n <= sys.n_max(); n += s) {
      idx.push_back(n);
      val.push_back(std::exp(std::log(sys.kappa(n)) / n));
    }
    const double target = std::pow(out.lambdas[k - 1], 1.0 / s);
    Trend t = make_trend(idx, val, target, opt.rule);
    if (!idx.empty()) {
      out.alpha.push_back(std::log(sys.kappa(idx.back())) / idx.back());
      out.lower_bound_slack = std::min(out.lower_bound_slack, t.deviation);
    }
    vs.push_back(t.verdict);
    out.per_class.push_back(std::move(t));
  }
  double log_target = 0.0;
  for (double l : out.lambdas) log_target += std::log(l);
  std::vector<int> idx;
  std::vector<double> val;
  for (int n = 1; n + s <= sys.n_max(); ++n) {
    double acc = 0.0;
    for (int l = 1; l <= s; ++l) acc += std::log(sys.kappa(n + l));
    idx.push_back(n);
    val.push_back(std::exp(acc / n));
  }
  out.product = make_trend(idx, val, std::exp(log_target / s), opt.rule);
  vs.push_back(out.product.verdict);
  if (!std::isfinite(out.lower_bound_slack)) out.lower_bound_slack = 0.0;
  // The bound is asymptotic: a finite-n shortfall is tolerated when the c/n limit clears it.
  out.lower_bound_ok = true;
  for (const Trend& t : out.per_class)
    if (!t.index.empty() && t.deviation < -opt.lower_bound_margin && t.extrapolated - t.target < -opt.lower_bound_margin)
      out.lower_bound_ok = false;
  out.verdict = out.truncated ? Verdict::Inconclusive : combine(vs);
  return out;
}

BetaSection beta_diagnostic(const GMPMatrix& a, const GreenEvaluator& ge, const RegularityOptions& opt) {
  BetaSection out;
  out.lambda = gamma_lambda(ge, a.poles(), a.infinity_slot()).lambda;
  const std::vector<double> beta = beta_sequence(a);
  std::vector<int> idx;
  std::vector<double> val;
  double acc = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (!(beta[j] > 0.0)) throw InvariantViolation("non-positive outermost GMP entry");
    acc += std::log(beta[j]);
    idx.push_back(static_cast<int>(j + 1));
    val.push_back(std::exp(acc / static_cast<double>(j + 1)));
  }
  out.trend = make_trend(idx, val, 1.0 / out.lambda, opt.rule);
  out.upper_bound_slack = val.empty() ? 0.0 : -out.trend.deviation;
  out.upper_bound_ok = out.upper_bound_slack >= -opt.beta_bound_margin ||
                       out.trend.target - out.trend.extrapolated >= -opt.beta_bound_margin;
  out.verdict = out.trend.verdict;
  return out;
}

GrowthSection green_growth_check(const OrthoSystem& sys, const GreenEvaluator& ge,
                                 const std::vector<std::complex<double>>& z_grid, const RegularityOptions& opt) {
  const PoleSequence& c = sys.poles();
  GrowthSection out;
  out.lower_bound_slack = std::numeric_limits<double>::infinity();
  bool all_close = true;
  for (const auto& z : z_grid) {
    if (z.imag() == 0.0) throw ConfigError("growth grid points must be off the real line");
    GrowthPoint p;
    p.z = z;
    p.calg = calG(ge, c, z);
    p.min_deviation = std::numeric_limits<double>::infinity();
    double hmin = std::numeric_limits<double>::infinity();
    double hmax = -hmin;
    for (int k = 1; k <= c.period(); ++k) {
      const int n = last_in_class(c, sys.n_max(), k);
      if (n < 1) continue;
      const double h = growth_exponent(sys, n, z);
      p.n.push_back(n);
      p.h.push_back(h);
      p.min_deviation = std::min(p.min_deviation, h - p.calg);
      p.max_abs_deviation = std::max(p.max_abs_deviation, std::abs(h - p.calg));
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
    }
    if (p.h.empty()) continue;
    p.class_spread = hmax - hmin;
    out.lower_bound_slack = std::min(out.lower_bound_slack, p.min_deviation);
    out.max_class_spread = std::max(out.max_class_spread, p.class_spread);
    all_close = all_close && p.max_abs_deviation <= opt.growth_accept;
    out.points.push_back(std::move(p));
  }
  if (!std::isfinite(out.lower_bound_slack)) out.lower_bound_slack = 0.0;
  out.lower_bound_ok = out.lower_bound_slack >= -opt.lower_bound_margin;
  out.verdict = out.points.empty() ? Verdict::Inconclusive
                : all_close       ? Verdict::ConsistentWithRegular
                                  : Verdict::Inconclusive;
  return out;
}

double cdf_distance(const std::vector<ExtendedReal>& zeros, int n, const Measure& rho) {
  std::vector<double> x;
  for (const auto& z : zeros)
    if (z.is_finite()) x.push_back(z.value());
  std::sort(x.begin(), x.end());
  const double inv = 1.0 / n;
  double d = std::abs(1.0 - x.size() * inv);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = rho.cdf(x[i]);
    d = std::max({d, std::abs(f - i * inv), std::abs(f - (i + 1) * inv)});
  }
  return d;
}

ZeroDistSection zero_dist_diagnostic(const OrthoSystem& sys, const Measure& rho, const std::vector<int>& ns) {
  ZeroDistSection out;
  const int g = sys.genus();
  for (int n : ns) {
    if (n < 1 || n > sys.n_max()) throw ConfigError("zero-distribution index out of range");
    const ZeroSet zs = zeros(sys, n);
    out.n.push_back(n);
    out.zero_count.push_back(static_cast<int>(zs.zeros.size()));
    out.distance.push_back(cdf_distance(zs.zeros, n, rho));
    out.mass_bound_ok = out.mass_bound_ok && out.zero_count.back() >= n - g && out.zero_count.back() <= n;
  }
  for (std::size_t i = 1; i < out.distance.size(); ++i)
    out.trend_ok = out.trend_ok && out.distance[i] <= 1.2 * out.distance[i - 1];
  return out;
}

namespace {

double sup_abs(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t i = from; i < std::min(to, v.size()); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

double tail_bound(const JacobiMatrix& j, const TorusSampleSet& t, int horizon) {
  double sup_t = 0.0;
  for (const auto& s : t.samples) sup_t = std::max(sup_t, sup_abs(s.a, 0, s.a.size()) + sup_abs(s.b, 0, s.b.size()));
  const double sup_j = sup_abs(j.a, 0, j.a.size()) + sup_abs(j.b, 0, j.b.size());
  return std::exp(-double(horizon)) / (std::numbers::e - 1.0) * (sup_j + sup_t);
}

}  // namespace

NevaiDistance nevai_distance(const JacobiMatrix& j, int m, const TorusSampleSet& t, int horizon) {
  NevaiDistance out;
  out.horizon = horizon;
  out.value = kernels::nevai_distances(j.a, j.b, t.samples, m, m, horizon, kernels::Exec::Serial).front();
  out.tail_bound = tail_bound(j, t, horizon);
  return out;
}

CesaroSection cesaro_stat(const JacobiMatrix& j, const TorusSampleSet& t, int n, int horizon,
                          const BlockJacobi* blocks, kernels::Exec exec) {
  if (n < 1) throw ConfigError("Cesaro average needs N >= 1");
  CesaroSection out;
  out.n = n;
  out.horizon = horizon;
  const std::vector<double> d = kernels::nevai_distances(j.a, j.b, t.samples, 1, n, horizon, exec);
  double s1 = 0.0, s2 = 0.0, sup = 0.0;
  for (double x : d) {
    s1 += x;
    s2 += x * x;
    sup = std::max(sup, x);
  }
  out.l1 = s1 / n;
  out.l2 = s2 / n;
  out.tail_bound = tail_bound(j, t, horizon);
  const double slack = 1e-12 * std::max(1.0, sup);
  out.cauchy_schwarz_ok = out.l1 * out.l1 <= out.l2 + slack && out.l2 <= sup * out.l1 + slack;
  if (blocks) {
    const int avail = std::min<int>(n, static_cast<int>(blocks->v.size()) - 1);
    if (avail >= 1) {
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(blocks->block_size(), blocks->block_size());
      double b1 = 0.0, b2 = 0.0;
      for (int l = 1; l <= avail; ++l) {
        const double w = blocks->w[l].norm();
        const double v = (blocks->v[l] - id).norm();
        b1 += w + v;
        b2 += w * w + v * v;
      }
      out.block_l1 = b1 / avail;
      out.block_l2 = b2 / avail;
    }
  }
  return out;
}

SparseStats sparse_stats(const std::vector<double>& f, double delta, int n) {
  if (n < 1 || n > static_cast<int>(f.size())) throw ConfigError("sparse statistics need 1 <= N <= length");
  if (!(delta > 0.0)) throw ConfigError("sparse threshold must be positive");
  SparseStats out;
  out.n = n;
  out.delta = delta;
  int hits = 0;
  double s = 0.0;
  for (int m = 0; m < n; ++m) {
    s += std::abs(f[m]);
    if (std::abs(f[m]) >= delta) ++hits;
  }
  out.average = s / n;
  out.density = static_cast<double>(hits) / n;
  out.markov_ok = out.density <= out.average / delta * (1.0 + 1e-12);
  return out;
}

RankOneShift rank_one_shift(const JacobiMatrix& j, const PoleSequence& c, int m, double margin, double step,
                            int max_steps) {
  const Eigen::MatrixXd base = j.truncation(m);
  std::vector<double> finite;
  for (const auto& p : c.points())
    if (p.is_finite()) finite.push_back(p.value());
  for (int i = 0; i <= 2 * max_steps; ++i) {
    const double t = (i == 0) ? 0.0 : ((i % 2 == 1) ? 1.0 : -1.0) * step * ((i + 1) / 2);
    Eigen::MatrixXd jt = base;
    jt(0, 0) += t;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(jt, Eigen::EigenvaluesOnly).eigenvalues();
    double achieved = std::numeric_limits<double>::infinity();
    for (double cf : finite)
      for (int e = 0; e < ev.size(); ++e) achieved = std::min(achieved, std::abs(cf - ev(e)));
    if (achieved >= margin) return {t, achieved};
  }
  throw NumericalFailure("no rank-one shift within the scan range keeps the poles off the spectrum");
}

RegularityReport assess(const OrthoSystem& sys, const GMPMatrix* a, const GreenEvaluator& ge,
                        const RegularityOptions& opt) {
  RegularityReport r;
  std::vector<Verdict> vs;
  r.kappa = kappa_diagnostic(sys, ge, opt);
  vs.push_back(r.kappa->verdict);
  if (r.kappa->truncated) r.notes.push_back("orthonormal system truncated by Gram rank; kappa verdict inconclusive");
  if (a) {
    r.beta = beta_diagnostic(*a, ge, opt);
    vs.push_back(r.beta->verdict);
  }
  const auto grid = opt.z_grid.empty() ? default_growth_grid(ge.set()) : opt.z_grid;
  r.growth = green_growth_check(sys, ge, grid, opt);
  if (!opt.zero_ns.empty()) r.zeros = zero_dist_diagnostic(sys, rho_EC(ge, sys.poles()), opt.zero_ns);

  std::ostringstream os;
  if (!r.kappa->lower_bound_ok) os << " kappa lower bound slack " << r.kappa->lower_bound_slack << ";";
  if (!r.growth->lower_bound_ok) os << " growth lower bound slack " << r.growth->lower_bound_slack << ";";
  if (r.beta && !r.beta->upper_bound_ok) os << " beta product bound slack " << r.beta->upper_bound_slack << ";";
  if (!os.str().empty())
    throw NumericalFailure("universal bound violated beyond its margin (precision too low?):" + os.str());
  r.verdict = combine(vs);
  return r;
}

}  // namespace ratgmp
