#include "ratgmp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ratgmp/kernels.hpp"

namespace ratgmp {

// ---- SupportArc ----

bool SupportArc::contains_infinity() const noexcept {
  if (from.is_infinite() || to.is_infinite()) return true;
  return from.value() > to.value();
}

bool SupportArc::contains(const ExtendedReal& x, double margin) const noexcept {
  if (x.is_infinite()) {
    if (contains_infinity()) return true;
    // Finite arc: near infinity only if an endpoint is huge.
    const double reach = std::max(std::abs(from.value()), std::abs(to.value())) + margin;
    return margin > 0.0 && reach >= 1.0 / margin;
  }
  const double v = x.value();
  if (from.is_infinite() && to.is_infinite()) return true;
  if (from.is_infinite()) return v <= to.value() + margin;
  if (to.is_infinite()) return v >= from.value() - margin;
  const double a = from.value();
  const double b = to.value();
  if (a <= b) return v >= a - margin && v <= b + margin;
  return v >= a - margin || v <= b + margin;
}

// ---- densities and parts ----

double ChebyshevDensity::operator()(double t) const {
  double num = numerator_scale;
  for (double r : numerator_roots) num *= (t - r);
  double den = 1.0;
  for (double e : endpoints) den *= (t - e);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(num) / (std::numbers::pi * std::sqrt(std::abs(den)));
}

SupportArc BandPart::support() const {
  const ExtendedReal a = map.apply(ExtendedReal(base.lo));
  const ExtendedReal b = map.apply(ExtendedReal(base.hi));
  if (map.orientation() > 0) return {a, b};
  return {b, a};
}

double BandPart::mass(int nodes) const {
  if (const auto* cd = std::get_if<ChebyshevDensity>(&density)) {
    Accumulator<double> acc;
    for (int i = 1; i <= nodes; ++i) {
      const double t = base.mid() + base.half() * std::cos(std::numbers::pi * (2 * i - 1) / (2.0 * nodes));
      acc.add(cd->regular_part(t, base.lo, base.hi));
    }
    return scale * std::numbers::pi / nodes * acc.value();
  }
  const auto& sd = std::get<SampledDensity>(density);
  Accumulator<double> acc;
  for (double w : sd.weights) acc.add(w);
  return scale * acc.value();
}

double BandPart::base_cdf(double u, int nodes) const {
  if (u <= base.lo) return 0.0;
  if (u >= base.hi) return mass(nodes);
  if (const auto* cd = std::get_if<ChebyshevDensity>(&density)) {
    const double theta_u = std::acos(std::clamp((u - base.mid()) / base.half(), -1.0, 1.0));
    auto integrand = [&](double theta) {
      return cd->regular_part(base.mid() + base.half() * std::cos(theta), base.lo, base.hi);
    };
    using boost::math::quadrature::gauss_kronrod;
    return scale * gauss_kronrod<double, 31>::integrate(integrand, theta_u, std::numbers::pi, 15, 1e-13);
  }
  const auto& sd = std::get<SampledDensity>(density);
  Accumulator<double> acc;
  for (std::size_t i = 0; i < sd.nodes.size(); ++i)
    if (sd.nodes[i] <= u) acc.add(sd.weights[i]);
  return scale * acc.value();
}

// ---- Measure ----

namespace {

void validate_part(const BandPart& p) {
  if (!std::isfinite(p.base.lo) || !std::isfinite(p.base.hi) || !(p.base.lo < p.base.hi))
    throw DomainError("band part needs a bounded interval with nonempty interior");
  if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw DomainError("band part scale must be positive");
  if (const auto* cd = std::get_if<ChebyshevDensity>(&p.density)) {
    const bool has_lo = std::find(cd->endpoints.begin(), cd->endpoints.end(), p.base.lo) != cd->endpoints.end();
    const bool has_hi = std::find(cd->endpoints.begin(), cd->endpoints.end(), p.base.hi) != cd->endpoints.end();
    if (!has_lo || !has_hi) throw DomainError("Chebyshev-type density must list the band ends as endpoints");
    if (!(cd->numerator_scale > 0.0)) throw DomainError("density numerator scale must be positive");
  } else {
    const auto& sd = std::get<SampledDensity>(p.density);
    if (sd.nodes.empty() || sd.nodes.size() != sd.weights.size())
      throw DomainError("sampled density needs matching nonempty node and weight lists");
    for (std::size_t i = 0; i < sd.nodes.size(); ++i) {
      if (!p.base.contains(sd.nodes[i])) throw DomainError("sampled node outside its band");
      if (!(sd.weights[i] >= 0.0) || !std::isfinite(sd.weights[i]))
        throw DomainError("sampled density weights must be nonnegative");
    }
  }
}

}  // namespace

Measure::Measure(std::vector<BandPart> parts, std::vector<Atom> atoms,
                 std::optional<std::vector<SupportArc>> essential_support, int mass_nodes)
    : parts_(std::move(parts)), atoms_(std::move(atoms)) {
  for (const auto& p : parts_) validate_part(p);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].weight > 0.0) || !std::isfinite(atoms_[i].weight))
      throw DomainError("atom weights must be positive and finite");
    if (atoms_[i].position.is_finite() && !std::isfinite(atoms_[i].position.value()))
      throw DomainError("atom position must be finite or the point at infinity");
    for (std::size_t j = 0; j < i; ++j)
      if (atoms_[i].position == atoms_[j].position) throw DomainError("atom positions must be distinct");
  }
  Accumulator<double> total;
  for (const auto& a : atoms_) total.add(a.weight);
  for (const auto& p : parts_) total.add(p.mass(mass_nodes));
  const double s = total.value();
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("measure is not normalizable");
  for (auto& a : atoms_) a.weight /= s;
  for (auto& p : parts_) p.scale /= s;
  if (essential_support) {
    essential_ = std::move(*essential_support);
  } else {
    for (const auto& p : parts_) essential_.push_back(p.support());
  }
}

Measure Measure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("atomic measure needs at least one atom");
  return Measure({}, std::move(atoms), std::vector<SupportArc>{});
}

Measure Measure::arcsine(Interval band) {
  ChebyshevDensity cd{{band.lo, band.hi}, {}, 1.0};
  return Measure({BandPart{band, cd, MoebiusMap::identity(), 1.0}}, {});
}

Measure Measure::chebyshev_type(const FiniteGapSet& e, std::vector<double> numerator_roots, int mass_nodes) {
  ChebyshevDensity cd{e.endpoints(), std::move(numerator_roots), 1.0};
  std::vector<BandPart> parts;
  for (const auto& b : e.bands()) parts.push_back(BandPart{b, cd, MoebiusMap::identity(), 1.0});
  return Measure(std::move(parts), {}, std::nullopt, mass_nodes);
}

Measure Measure::sampled(Interval band, std::vector<double> nodes, std::vector<double> weights) {
  return Measure({BandPart{band, SampledDensity{std::move(nodes), std::move(weights)}, MoebiusMap::identity(), 1.0}}, {});
}

Measure Measure::mixture(const std::vector<std::pair<double, Measure>>& components,
                         std::optional<std::vector<SupportArc>> essential_support) {
  double total = 0.0;
  for (const auto& [w, m] : components) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("mixture has no mass");
  std::vector<BandPart> parts;
  std::vector<Atom> atoms;
  std::vector<SupportArc> ess;
  for (const auto& [w, m] : components) {
    if (w == 0.0) continue;
    const double f = w / total;
    for (auto p : m.parts_) {
      p.scale *= f;
      parts.push_back(std::move(p));
    }
    for (const auto& a : m.atoms_) {
      auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Atom& x) { return x.position == a.position; });
      if (it == atoms.end()) atoms.push_back({a.position, a.weight * f});
      else it->weight += a.weight * f;
    }
    ess.insert(ess.end(), m.essential_.begin(), m.essential_.end());
  }
  if (essential_support) ess = std::move(*essential_support);
  return Measure(std::move(parts), std::move(atoms), std::move(ess));
}

Measure Measure::pushforward(const MoebiusMap& f) const {
  Measure out;
  out.parts_ = parts_;
  for (auto& p : out.parts_) p.map = compose(f, p.map);
  out.atoms_ = atoms_;
  for (auto& a : out.atoms_) a.position = f.apply(a.position);
  for (const auto& arc : essential_) {
    const ExtendedReal a = f.apply(arc.from);
    const ExtendedReal b = f.apply(arc.to);
    out.essential_.push_back(f.orientation() > 0 ? SupportArc{a, b} : SupportArc{b, a});
  }
  return out;
}

std::optional<FiniteGapSet> Measure::essential_gap_set() const {
  if (essential_.empty()) return std::nullopt;
  std::vector<Interval> bands;
  for (const auto& arc : essential_) {
    if (arc.contains_infinity()) return std::nullopt;
    bands.push_back({arc.from.value(), arc.to.value()});
  }
  try {
    return FiniteGapSet(std::move(bands));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

bool Measure::charges(const ExtendedReal& x, double margin) const noexcept {
  for (const auto& a : atoms_)
    if (distance(a.position, x) <= margin) return true;
  for (const auto& p : parts_)
    if (p.support().contains(x, margin)) return true;
  return false;
}

bool Measure::touches_infinity() const noexcept {
  for (const auto& a : atoms_)
    if (a.position.is_infinite()) return true;
  for (const auto& p : parts_)
    if (p.support().contains_infinity()) return true;
  return false;
}

std::optional<std::size_t> Measure::finite_support_size() const noexcept {
  if (!parts_.empty()) return std::nullopt;
  return atoms_.size();
}

double Measure::total_mass(int nodes) const {
  Accumulator<double> acc;
  for (const auto& a : atoms_) acc.add(a.weight);
  for (const auto& p : parts_) acc.add(p.mass(nodes));
  return acc.value();
}

double Measure::cdf(double x, int nodes) const {
  Accumulator<double> acc;
  for (const auto& a : atoms_)
    if (a.position.is_finite() && a.position.value() <= x) acc.add(a.weight);
  for (const auto& p : parts_) {
    const SupportArc arc = p.support();
    if (arc.contains_infinity()) throw DomainError("cdf undefined for a band image through infinity");
    const double lo = arc.from.value();
    const double hi = arc.to.value();
    if (x < lo) continue;
    const double m = p.mass(nodes);
    if (x >= hi) {
      acc.add(m);
      continue;
    }
    const double u = invert(p.map).apply(ExtendedReal(x)).value();
    const double below = p.base_cdf(u, nodes);
    acc.add(p.map.orientation() > 0 ? below : m - below);
  }
  return acc.value();
}

// ---- PoleSequence ----

PoleSequence::PoleSequence(std::vector<ExtendedReal> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("pole sequence must contain at least one point");
  int infinities = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].is_infinite()) ++infinities;
    else if (!std::isfinite(points_[i].value())) throw DomainError("poles must be finite or infinity");
    for (std::size_t j = 0; j < i; ++j)
      if (points_[i] == points_[j]) throw DomainError("pole sequence has a repeated point");
  }
  if (infinities > 1) throw DomainError("pole sequence contains infinity more than once");
}

int PoleSequence::infinity_slot() const noexcept {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].is_infinite()) return static_cast<int>(i) + 1;
  return 0;
}

int PoleSequence::slot_of(int n) const noexcept {
  if (n <= 0) return period();
  return (n - 1) % period() + 1;
}

int PoleSequence::order_of(int n) const noexcept {
  if (n <= 0) return 0;
  return (n - 1) / period() + 1;
}

void PoleSequence::validate_for(const Measure& mu, double margin) const {
  for (int k = 1; k <= period(); ++k)
    if (mu.charges(pole(k), margin)) {
      std::ostringstream os;
      os << "pole c_" << k << " = " << pole(k) << " lies on or too close to the support of the measure";
      throw DomainError(os.str());
    }
}

PoleSequence PoleSequence::image(const MoebiusMap& f) const {
  std::vector<ExtendedReal> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(f.apply(p));
  return PoleSequence(std::move(pts));
}

// ---- basis ----

BasisFunction basis_r(int n, const PoleSequence& c) {
  if (n < 0) throw ConfigError("basis index must be nonnegative");
  if (n == 0) return {0, ExtendedReal::infinity(), 0};
  return {n, c.pole(c.slot_of(n)), c.order_of(n)};
}

std::complex<double> BasisFunction::operator()(std::complex<double> z) const {
  if (order == 0) return 1.0;
  std::complex<double> base;
  if (pole.is_infinite()) {
    base = z;
  } else {
    const std::complex<double> den = pole.value() - z;
    if (den == 0.0) throw DomainError("basis function evaluated at its pole");
    base = 1.0 / den;
  }
  std::complex<double> r = 1.0;
  for (int i = 0; i < order; ++i) r *= base;
  return r;
}

std::string BasisFunction::describe() const {
  std::ostringstream os;
  if (order == 0) os << "1";
  else if (pole.is_infinite()) os << "z^" << order;
  else os << "1/(" << pole.value() << " - z)^" << order;
  return os.str();
}

// ---- pairings ----

std::complex<double> inner_product(const std::function<std::complex<double>(const ExtendedReal&)>& f,
                                   const std::function<std::complex<double>(const ExtendedReal&)>& g,
                                   const Measure& mu, int nodes_per_band) {
  const NodeSet<double> nodes = mu.discretize<double>(nodes_per_band);
  Accumulator<double> re, im;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExtendedReal x = nodes.at_infinity[i] ? ExtendedReal::infinity() : ExtendedReal(nodes.x[i]);
    const std::complex<double> fx = f(x);
    const std::complex<double> gx = g(x);
    if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag()) || !std::isfinite(gx.real()) ||
        !std::isfinite(gx.imag()))
      throw DomainError("integrand not finite at a support point");
    const std::complex<double> v = std::conj(fx) * gx * nodes.w[i];
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

GramReport gram(const Measure& mu, const PoleSequence& c, int n_max, int nodes_per_band) {
  if (n_max < 0) throw ConfigError("N must be nonnegative");
  c.validate_for(mu);
  const NodeSet<double> nodes = mu.discretize<double>(nodes_per_band);
  const auto v = kernels::basis_matrix(nodes, c, n_max, kernels::Exec::Serial);
  const auto g = kernels::gram(v, nodes.w, kernels::Exec::Serial);
  GramReport out;
  const int n = n_max + 1;
  out.matrix.assign(n, std::vector<double>(n));
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = out.matrix[i][j] = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  out.singular = out.min_eigenvalue <= n * std::numeric_limits<double>::epsilon() * out.norm;
  return out;
}

}  // namespace ratgmp
