#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "ratgmp/errors.hpp"
#include "ratgmp/finite_gap_set.hpp"
#include "ratgmp/moebius.hpp"
#include "ratgmp/precision.hpp"

namespace ratgmp {

struct Atom {
  ExtendedReal position;
  double weight = 0.0;
};

// Closed arc of the extended real line, traversed upward from `from` to `to`.
// from > to (or an infinite endpoint) means the arc passes through infinity.
struct SupportArc {
  ExtendedReal from;
  ExtendedReal to;

  bool contains(const ExtendedReal& x, double margin = 0.0) const noexcept;
  bool contains_infinity() const noexcept;
};

// density(t) = scale * |prod (t - root)| / (pi * sqrt|prod (t - e)|) over the listed endpoints.
struct ChebyshevDensity {
  std::vector<double> endpoints;
  std::vector<double> numerator_roots;
  double numerator_scale = 1.0;

  double operator()(double t) const;
  // Smooth factor h with density = h(t) / sqrt((t - lo)(hi - t)) on the band [lo, hi].
  template <class Real>
  Real regular_part(const Real& t, double lo, double hi) const {
    Real num = Real(numerator_scale);
    for (double r : numerator_roots) num *= (t - Real(r));
    using std::abs;
    using std::sqrt;
    num = abs(num);
    Real den = Real(1);
    for (double e : endpoints)
      if (e != lo && e != hi) den *= (t - Real(e));
    return num / (boost::math::constants::pi<Real>() * sqrt(abs(den)));
  }
};

// Explicit nodes with masses (already including quadrature weights).
struct SampledDensity {
  std::vector<double> nodes;
  std::vector<double> weights;
};

using DensityDescriptor = std::variant<ChebyshevDensity, SampledDensity>;

// Absolutely continuous piece: a density on `base`, transported by `map`.
struct BandPart {
  Interval base;
  DensityDescriptor density;
  MoebiusMap map;
  double scale = 1.0;

  SupportArc support() const;
  // Mass of the part, using `nodes` quadrature points for closed forms.
  double mass(int nodes) const;
  // Mass of {t in base : t <= u}, before mapping.
  double base_cdf(double u, int nodes) const;
};

// Weighted point set discretizing a measure in working precision.
template <class Real>
struct NodeSet {
  std::vector<Real> x;
  std::vector<char> at_infinity;
  std::vector<Real> w;

  std::size_t size() const noexcept { return w.size(); }
};

inline constexpr int kDefaultNodesPerBand = 512;

class Measure {
 public:
  Measure() = default;
  // Normalizes to total mass one. Without an explicit essential support, the
  // supports of the band parts are used.
  Measure(std::vector<BandPart> parts, std::vector<Atom> atoms,
          std::optional<std::vector<SupportArc>> essential_support = std::nullopt,
          int mass_nodes = kDefaultNodesPerBand);

  static Measure atomic(std::vector<Atom> atoms);
  static Measure arcsine(Interval band);
  // Density scale*|prod(t - roots)| / (pi sqrt|prod(t - e)|) on every band of E.
  static Measure chebyshev_type(const FiniteGapSet& e, std::vector<double> numerator_roots,
                                int mass_nodes = kDefaultNodesPerBand);
  static Measure sampled(Interval band, std::vector<double> nodes, std::vector<double> weights);
  // Convex combination; weights are normalized. The essential support defaults
  // to the union of the components' supports.
  static Measure mixture(const std::vector<std::pair<double, Measure>>& parts,
                         std::optional<std::vector<SupportArc>> essential_support = std::nullopt);

  Measure pushforward(const MoebiusMap& f) const;

  const std::vector<BandPart>& parts() const noexcept { return parts_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<SupportArc>& essential_support() const noexcept { return essential_; }
  // Essential support as a finite gap set when it is a finite union of bounded intervals.
  std::optional<FiniteGapSet> essential_gap_set() const;

  // Whether x lies within `margin` of the closed support.
  bool charges(const ExtendedReal& x, double margin = 0.0) const noexcept;
  bool touches_infinity() const noexcept;
  // Number of support points when finite; nullopt if the measure has a band part.
  std::optional<std::size_t> finite_support_size() const noexcept;

  double total_mass(int nodes = kDefaultNodesPerBand) const;
  // mu((-inf, x]); band images must not pass through infinity.
  double cdf(double x, int nodes = kDefaultNodesPerBand) const;

  template <class Real>
  NodeSet<Real> discretize(int nodes_per_band) const;

 private:
  std::vector<BandPart> parts_;
  std::vector<Atom> atoms_;
  std::vector<SupportArc> essential_;
};

// The pole sequence c_1..c_{g+1} (1-based accessors).
class PoleSequence {
 public:
  PoleSequence() = default;
  explicit PoleSequence(std::vector<ExtendedReal> points);

  int genus() const noexcept { return static_cast<int>(points_.size()) - 1; }
  int period() const noexcept { return static_cast<int>(points_.size()); }
  const ExtendedReal& pole(int k) const { return points_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<ExtendedReal>& points() const noexcept { return points_; }
  // 1-based slot of the point at infinity, 0 when absent.
  int infinity_slot() const noexcept;

  // n = j(g+1) + k with 1 <= k <= g+1; n = 0 is assigned slot g+1.
  int slot_of(int n) const noexcept;
  // Pole order j+1 of r_n (0 for n = 0).
  int order_of(int n) const noexcept;

  // Throws DomainError when a pole is within `margin` of supp mu.
  void validate_for(const Measure& mu, double margin = 1e-9) const;
  PoleSequence image(const MoebiusMap& f) const;

 private:
  std::vector<ExtendedReal> points_;
};

// r_n as (pole, order); r_0 has order 0.
struct BasisFunction {
  int n = 0;
  ExtendedReal pole;
  int order = 0;

  std::complex<double> operator()(std::complex<double> z) const;
  std::string describe() const;
};

BasisFunction basis_r(int n, const PoleSequence& c);

// L2(mu) pairing sum conj(F) G over atoms then bands, compensated.
std::complex<double> inner_product(const std::function<std::complex<double>(const ExtendedReal&)>& f,
                                   const std::function<std::complex<double>(const ExtendedReal&)>& g,
                                   const Measure& mu, int nodes_per_band = kDefaultNodesPerBand);

struct GramReport {
  std::vector<std::vector<double>> matrix;
  double min_eigenvalue = 0.0;
  double norm = 0.0;
  bool singular = false;
};

// Gram matrix of r_0..r_N in double precision with a rank check.
GramReport gram(const Measure& mu, const PoleSequence& c, int n_max,
                int nodes_per_band = kDefaultNodesPerBand);

// ---- template implementation ----

template <class Real>
NodeSet<Real> Measure::discretize(int nodes_per_band) const {
  if (nodes_per_band < 1) throw ConfigError("node budget must be positive");
  NodeSet<Real> out;
  auto push = [&](const Real& x, bool inf, const Real& w) {
    out.x.push_back(x);
    out.at_infinity.push_back(inf ? 1 : 0);
    out.w.push_back(w);
  };
  for (const auto& a : atoms_) {
    if (a.position.is_infinite()) push(Real(0), true, Real(a.weight));
    else push(Real(a.position.value()), false, Real(a.weight));
  }
  const Real pi = boost::math::constants::pi<Real>();
  for (const auto& part : parts_) {
    const MoebiusMap& f = part.map;
    auto push_mapped = [&](const Real& t, const Real& w) {
      const Real den = Real(f.c()) * t + Real(f.d());
      if (den == 0) push(Real(0), true, w);
      else push((Real(f.a()) * t + Real(f.b())) / den, false, w);
    };
    if (const auto* cd = std::get_if<ChebyshevDensity>(&part.density)) {
      const Real mid = (Real(part.base.lo) + Real(part.base.hi)) / 2;
      const Real half = (Real(part.base.hi) - Real(part.base.lo)) / 2;
      const int m = nodes_per_band;
      for (int i = 1; i <= m; ++i) {
        using std::cos;
        const Real theta = pi * Real(2 * i - 1) / Real(2 * m);
        const Real t = mid + half * cos(theta);
        const Real w = pi / Real(m) * cd->regular_part(t, part.base.lo, part.base.hi) *
                       Real(part.scale);
        push_mapped(t, w);
      }
    } else {
      const auto& sd = std::get<SampledDensity>(part.density);
      for (std::size_t i = 0; i < sd.nodes.size(); ++i)
        push_mapped(Real(sd.nodes[i]), Real(sd.weights[i]) * Real(part.scale));
    }
  }
  Accumulator<Real> total;
  for (const auto& w : out.w) total.add(w);
  const Real s = total.value();
  if (!(s > 0)) throw NumericalFailure("discretized measure has no mass");
  for (auto& w : out.w) w /= s;
  return out;
}

}  // namespace ratgmp
