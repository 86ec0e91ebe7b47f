#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ratgmp/finite_gap_set.hpp"
#include "ratgmp/gmp.hpp"
#include "ratgmp/measure.hpp"
#include "ratgmp/potential.hpp"

namespace ratgmp {

// Delta(z) = lambda_{g+1} z + d + sum_k lambda_k / (c_k - z), fitted so that
// Delta = -2 at left band ends and +2 at right band ends.
class Discriminant {
 public:
  struct Data {
    std::vector<double> lambdas;  // lambda_1..lambda_g, then lambda_{g+1} for the pole at infinity
    double d = 0.0;
    std::vector<double> zeros;  // c_1..c_g, one per gap
  };

  Discriminant(FiniteGapSet e, Data data);

  const FiniteGapSet& set() const noexcept { return e_; }
  int genus() const noexcept { return e_.genus(); }
  const std::vector<double>& lambdas() const noexcept { return data_.lambdas; }
  double lambda(int k) const { return data_.lambdas.at(static_cast<std::size_t>(k - 1)); }
  double d() const noexcept { return data_.d; }
  const std::vector<double>& zeros() const noexcept { return data_.zeros; }
  // (c_1, ..., c_g, infinity).
  PoleSequence poles() const;

  std::complex<double> operator()(std::complex<double> z) const;
  double operator()(double x) const;
  double derivative(double x) const;
  // Delta(endpoint) minus its target, in endpoint order.
  std::vector<double> endpoint_residuals() const;

  int newton_iterations = 0;
  double residue_cross_check = 0.0;  // max relative gap to the potential-theory lambda_k

 private:
  FiniteGapSet e_;
  Data data_;
};

struct FitOptions {
  int max_iterations = 100;
  double tolerance = 1e-13;
  double cross_check_tol = 1e-5;
  int nodes = 512;
};

Discriminant fit_discriminant(const FiniteGapSet& e, const FitOptions& opt = {});

struct PreimageCheck {
  double max_band_excess = 0.0;  // max(|Delta| - 2) over band samples
  double min_outside_abs = 0.0;  // min |Delta| over gap and exterior samples
  bool ok(double tol = 1e-8) const noexcept { return max_band_excess <= tol && min_outside_abs > 2.0; }
};

PreimageCheck check_preimage(const Discriminant& delta, int samples_per_interval = 200);

// |Psi(z)| = exp(-sum_k G(z, c_k)) over the Ahlfors zeros and infinity.
double ahlfors_abs(const GreenEvaluator& ge, const Discriminant& delta, std::complex<double> z);

// (g+1)-block Jacobi matrix; v_j is the block above the diagonal, j = 0, 1, ...
struct BlockJacobi {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::MatrixXd> v;
  double type3_defect = 0.0;          // max |upper-triangular part of v_j| relative to the norm
  double det_identity_error = 0.0;    // max relative |det v_j / prod lambda Lambda - 1|
  std::vector<double> det_v;
  int block_size() const noexcept { return w.empty() ? 0 : static_cast<int>(w.front().rows()); }
};

// Delta(A) assembled from A and the resolvent GMP matrices of a family whose
// poles are (c_1, ..., c_g, infinity).
BlockJacobi apply_to_gmp(const Discriminant& delta, const GmpFamily& fam, double type3_tol = 1e-9,
                         double det_tol = 1e-6);

struct MagicResidual {
  std::vector<double> block_contribution;  // |w_l|^2 + |v_l - I|^2 (Hilbert-Schmidt)
  double h_plus = 0.0;                     // sum of |v_{l-1} - I|^2 + |w_l|^2 + |v_l - I|^2
  int first = 0;
  int last = -1;
};

MagicResidual magic_residual(const BlockJacobi& j);

// One-periodic GMP block: symbol A(theta) = B + p e_0^T e^{i theta} + e_0 p^T e^{-i theta}.
struct PeriodicGmp {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  double residual = 0.0;                 // max entry of Delta(A(theta)) - 2 cos(theta) I over samples
  std::vector<double> lambda_big_lambda;  // lambda_k * Lambda_k(A), k = 1..g+1
  int evaluations = 0;

  Eigen::MatrixXd b(const std::vector<double>& c) const;
};

Eigen::MatrixXcd periodic_symbol(const PeriodicGmp& a, const std::vector<double>& c, double theta);

PeriodicGmp magic_solve(const Discriminant& delta, const Eigen::VectorXd& p0, const Eigen::VectorXd& q0,
                        double tol = 1e-9);

}  // namespace ratgmp
