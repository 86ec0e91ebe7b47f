#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "ratgmp/finite_gap_set.hpp"
#include "ratgmp/measure.hpp"

namespace ratgmp {

// Equilibrium measure q(t) / (pi sqrt|R(t)|) of a finite gap set, q monic with
// one zero per gap, together with capacity, Robin constant and G(., infinity).
class EquilibriumModel {
 public:
  explicit EquilibriumModel(FiniteGapSet e, int nodes = kDefaultNodesPerBand);

  const FiniteGapSet& set() const noexcept { return e_; }
  const std::vector<double>& numerator_zeros() const noexcept { return zeta_; }
  double capacity() const noexcept { return std::exp(-robin_); }
  double robin() const noexcept { return robin_; }

  double density(double t) const;
  Measure measure() const;
  // Gap integrals of q / sqrt|R|; zero up to quadrature error.
  std::vector<double> gap_residuals() const;

  // Green function with pole at infinity.
  double green(double x) const;
  double green(std::complex<double> z) const;
  // Logarithmic potential of the equilibrium measure, by direct quadrature.
  double log_potential(std::complex<double> z) const;

 private:
  double q(double s) const;
  double q_over_sqrt_r_without(double s, double skip_a, double skip_b) const;
  double outer_tail(double x) const;  // integral over s beyond |x| of |q|/sqrt|R| - 1/|s|
  double gap_green(double x, const Interval& gap) const;
  double green_upper(std::complex<double> z) const;

  FiniteGapSet e_;
  std::vector<double> endpoints_;
  std::vector<double> zeta_;
  double robin_ = 0.0;
  int nodes_ = kDefaultNodesPerBand;
};

std::pair<double, double> capacity_robin(const FiniteGapSet& e);

// Green functions for arbitrary poles, with one cached equilibrium model per frame.
class GreenEvaluator {
 public:
  explicit GreenEvaluator(FiniteGapSet e, int nodes = kDefaultNodesPerBand);

  const FiniteGapSet& set() const noexcept { return e_; }
  // Model of f(E) where f sends w to infinity (identity frame for w = infinity).
  std::shared_ptr<const EquilibriumModel> frame(const ExtendedReal& w) const;

  double green(std::complex<double> z, const ExtendedReal& w) const;
  double green(const ExtendedReal& z, const ExtendedReal& w) const;
  // lim (G(z, w) + log|z - w|) or lim (G(z, infinity) - log|z|).
  double gamma(const ExtendedReal& w) const;
  // Harmonic measure at w.
  Measure harmonic_measure(const ExtendedReal& w) const;

 private:
  FiniteGapSet e_;
  int nodes_;
  mutable std::shared_mutex mutex_;
  mutable std::shared_ptr<const EquilibriumModel> at_infinity_;
  mutable std::map<double, std::shared_ptr<const EquilibriumModel>> finite_;
};

EquilibriumModel equilibrium(const FiniteGapSet& e, int nodes = kDefaultNodesPerBand);
double green(const FiniteGapSet& e, std::complex<double> z, const ExtendedReal& w);
double green(const FiniteGapSet& e, const ExtendedReal& z, const ExtendedReal& w);

struct GammaLambda {
  double gamma = 0.0;
  double log_lambda = 0.0;
  double lambda = 0.0;
};

// gamma_E^k and lambda_k for the 1-based slot k of C.
GammaLambda gamma_lambda(const GreenEvaluator& ge, const PoleSequence& c, int k);
GammaLambda gamma_lambda(const FiniteGapSet& e, const PoleSequence& c, int k);

// (1/(g+1)) sum_k G(z, c_k); +infinity at a pole.
double calG(const GreenEvaluator& ge, const PoleSequence& c, std::complex<double> z);
double calG(const FiniteGapSet& e, const PoleSequence& c, std::complex<double> z);

// Average of the harmonic measures at the poles.
Measure rho_EC(const GreenEvaluator& ge, const PoleSequence& c);
Measure rho_EC(const FiniteGapSet& e, const PoleSequence& c);

}  // namespace ratgmp
