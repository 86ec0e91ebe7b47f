#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratgmp/kernels.hpp"
#include "ratgmp/measure.hpp"
#include "ratgmp/moebius.hpp"

namespace ratgmp {

struct PrecisionPolicy {
  int start_bits = 53;
  int max_bits = 1024;
  // Escalate while eps * cond(Jacobi-scaled Gram) exceeds this.
  double pivot_budget = 1e-13;
  double orthonormality_tol = 1e-8;
  // Keep the largest reliable leading block instead of failing.
  bool truncate_on_rank_loss = false;
  int nodes_per_band = kDefaultNodesPerBand;
  kernels::Exec exec = kernels::Exec::Parallel;
};

struct PrecisionAttempt {
  int bits = 0;
  double min_scaled_pivot = 0.0;
  double condition_estimate = 0.0;  // over the reliable leading block
  int reliable_n = -1;
  double orthonormality_defect = 0.0;
  int rank = 0;
  bool accepted = false;
  std::string reason;
};

namespace detail {
struct CoefficientStore;
}

// tau_0..tau_N as rows of T over r_0..r_N, kept in the working precision.
class OrthoSystem {
 public:
  const Measure& measure() const noexcept { return mu_; }
  const PoleSequence& poles() const noexcept { return c_; }
  int genus() const noexcept { return c_.genus(); }
  // Largest valid index (smaller than requested after truncation).
  int n_max() const noexcept { return n_; }
  int requested_n() const noexcept { return requested_n_; }
  bool truncated() const noexcept { return n_ < requested_n_; }
  int precision_bits() const noexcept { return bits_; }
  const std::vector<PrecisionAttempt>& attempts() const noexcept { return attempts_; }

  double kappa(int n) const { return kappa_.at(static_cast<std::size_t>(n)); }
  const std::vector<double>& kappas() const noexcept { return kappa_; }
  // T[n][l] rounded to double.
  double coefficient(int n, int l) const;

  // tau_n(z) evaluated in working precision; throws DomainError at a finite pole.
  std::complex<double> evaluate(int n, std::complex<double> z) const;
  double log_abs(int n, std::complex<double> z) const;

  // Phi(i, n) = sqrt(w_i) tau_n(x_i) over the discretization nodes.
  const Eigen::MatrixXd& node_values() const noexcept { return phi_; }
  const std::vector<ExtendedReal>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  int nodes_per_band() const noexcept { return nodes_per_band_; }

  // Matrix of <tau_m, f tau_n> for m, n <= n_max(); f must be finite on the nodes.
  Eigen::MatrixXd multiplication(const std::function<double(const ExtendedReal&)>& f,
                                 kernels::Exec exec = kernels::Exec::Parallel) const;

  double orthonormality_defect() const noexcept { return defect_; }
  double min_scaled_pivot() const noexcept { return min_pivot_; }

 private:
  friend OrthoSystem orthonormalize(const Measure&, const PoleSequence&, int, const PrecisionPolicy&);

  Measure mu_;
  PoleSequence c_;
  int requested_n_ = 0;
  int n_ = 0;
  int bits_ = 53;
  int nodes_per_band_ = kDefaultNodesPerBand;
  std::vector<PrecisionAttempt> attempts_;
  std::vector<double> kappa_;
  std::shared_ptr<const detail::CoefficientStore> coeffs_;
  Eigen::MatrixXd phi_;
  std::vector<ExtendedReal> nodes_;
  std::vector<double> weights_;
  double defect_ = 0.0;
  double min_pivot_ = 0.0;
};

// Cholesky of the Gram matrix of r_0..r_N with automatic precision escalation.
OrthoSystem orthonormalize(const Measure& mu, const PoleSequence& c, int n_max,
                           const PrecisionPolicy& policy = {});

struct ZeroSet {
  int n = 0;
  std::vector<ExtendedReal> zeros;      // sorted, infinity last
  int degree = 0;
  std::vector<ExtendedReal> cancelled;  // eigenvalues removed as pole cancellations
  std::vector<ExtendedReal> borderline; // cancellation decisions close to the threshold
};

struct ZeroCheck {
  bool simple = true;
  bool count_in_range = true;
  bool one_per_gap = true;
  bool own_gap_empty = true;
  std::string detail;

  bool ok() const noexcept { return simple && count_in_range && one_per_gap && own_gap_empty; }
};

// Zeros of tau_n as eigenvalues of the compressed multiplication operator in the
// frame sending the own pole of tau_n to infinity.
ZeroSet zeros(const OrthoSystem& sys, int n, double cancellation_tol = 1e-7);
ZeroCheck check_zero_invariants(const ZeroSet& zs, const OrthoSystem& sys);
// Atoms of weight 1/n at the zeros.
std::vector<Atom> counting_measure(const ZeroSet& zs);
// (1/n) log |tau_n(z)|.
double growth_exponent(const OrthoSystem& sys, int n, std::complex<double> z);

}  // namespace ratgmp
