#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratgmp/measure.hpp"
#include "ratgmp/orf.hpp"

namespace ratgmp {

// Symmetric banded truncation of multiplication by x in the tau basis.
// Blocks: B_0 is k x k (k = slot of infinity), then (g+1) x (g+1) blocks.
class GMPMatrix {
 public:
  GMPMatrix(PoleSequence c, Eigen::MatrixXd dense);

  const PoleSequence& poles() const noexcept { return c_; }
  int genus() const noexcept { return c_.genus(); }
  int infinity_slot() const noexcept { return k_; }
  int size() const noexcept { return static_cast<int>(a_.rows()); }
  // Rows whose full band lies inside the truncation.
  int complete_rows() const noexcept { return std::max(0, size() - genus() - 1); }
  const Eigen::MatrixXd& dense() const noexcept { return a_; }
  double operator()(int m, int n) const { return a_(m, n); }
  double norm() const;

  int block_start(int j) const noexcept { return j == 0 ? 0 : k_ + (j - 1) * (genus() + 1); }
  int block_size(int j) const noexcept { return j == 0 ? k_ : genus() + 1; }
  // Number of j >= 1 with B_j and A_j inside the truncation.
  int block_count() const noexcept;
  Eigen::MatrixXd block_b(int j) const;
  Eigen::MatrixXd block_a(int j) const;
  // diag{0, c_{k+1}, ..., c_{g+1}, c_1, ..., c_{k-1}}.
  Eigen::VectorXd tilde_c() const;

  // Diagonal sign conjugation applied after a frame change (all +1 when none).
  const std::vector<int>& applied_signs() const noexcept { return signs_; }
  void set_applied_signs(std::vector<int> s) { signs_ = std::move(s); }

 private:
  PoleSequence c_;
  int k_ = 0;
  Eigen::MatrixXd a_;
  std::vector<int> signs_;
};

struct StructureReport {
  double symmetry_defect = 0.0;
  double bandwidth_residual = 0.0;  // relative to norm()
  double max_rank_one_ratio = 0.0;  // sigma_2 / sigma_1 over A_j, j >= 1
  double min_p0 = 0.0;
  double max_reconstruction_residual = 0.0;
  int blocks_checked = 0;

  bool ok(double band_tol = 1e-10, double rank_tol = 1e-8, double recon_tol = 1e-8) const noexcept {
    return symmetry_defect == 0.0 && bandwidth_residual <= band_tol && max_rank_one_ratio <= rank_tol &&
           (blocks_checked == 0 || min_p0 > 0.0) && max_reconstruction_residual <= recon_tol;
  }
};

struct GmpCoefficients {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  double reconstruction_residual = 0.0;  // max-entry norm relative to norm()
};

// A[m][n] = <tau_m, x tau_n>; throws NumericalFailure when the structure check fails.
GMPMatrix build_gmp(const OrthoSystem& sys);
StructureReport validate_structure(const GMPMatrix& a);
GmpCoefficients extract_pq(const GMPMatrix& a, int j);

// GMP matrix of the pushforward under z -> 1/(c_l - z); its entries are
// <tau_m, (c_l - x)^{-1} tau_n> in the original basis.
GMPMatrix resolvent_gmp(const Measure& mu, const PoleSequence& c, int ell, int n_max,
                        const PrecisionPolicy& policy = {});

// beta_j = A[n(j)][n(j) + g + 1] over the rows n(j) = j(g+1) + (k mod (g+1)) that
// carry the infinite slot k, starting with the first such row (row 0 when k = g+1).
double beta(const GMPMatrix& a, int j);
std::vector<double> beta_sequence(const GMPMatrix& a);

// The GMP matrix with its resolvents at every finite pole, all over one measure.
struct GmpFamily {
  OrthoSystem system;
  GMPMatrix a;
  std::map<int, GMPMatrix> resolvents;  // keyed by 1-based slot of a finite pole

  // A for the infinite slot, otherwise the resolvent at c_k.
  const GMPMatrix& for_slot(int k) const;
};

GmpFamily build_family(const Measure& mu, const PoleSequence& c, int n_max,
                       const PrecisionPolicy& policy = {});
// Reuses an orthonormalized system; resolvents start at its working precision.
GmpFamily build_family(OrthoSystem sys, const PrecisionPolicy& policy = {});

// Lambda_n = <tau_n, r_{k'} tau_{n+g+1}> with k' the slot of n.
double big_lambda(const GmpFamily& fam, int n);

struct LambdaIdentity {
  std::vector<double> lambda;          // Lambda_n for n = 0..count-1
  std::vector<double> relative_error;  // |Lambda_n kappa_{n+g+1} / kappa_n - 1|
  double max_relative_error = 0.0;
};

LambdaIdentity lambda_identity(const GmpFamily& fam);

}  // namespace ratgmp
