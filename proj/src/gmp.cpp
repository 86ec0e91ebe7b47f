#include "ratgmp/gmp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ratgmp {

GMPMatrix::GMPMatrix(PoleSequence c, Eigen::MatrixXd dense) : c_(std::move(c)), a_(std::move(dense)) {
  k_ = c_.infinity_slot();
  if (k_ == 0) throw DomainError("GMP structure needs the point at infinity among the poles");
  if (a_.rows() != a_.cols()) throw ConfigError("GMP matrix must be square");
  signs_.assign(static_cast<std::size_t>(a_.rows()), 1);
}

double GMPMatrix::norm() const {
  if (a_.size() == 0) return 0.0;
  return a_.cwiseAbs().rowwise().sum().maxCoeff();
}

int GMPMatrix::block_count() const noexcept {
  const int p = genus() + 1;
  int j = 0;
  while (block_start(j + 2) + p <= size()) ++j;
  return j;
}

Eigen::MatrixXd GMPMatrix::block_b(int j) const {
  const int s = block_start(j);
  const int n = block_size(j);
  if (j < 0 || s + n > size()) throw ConfigError("block index out of range");
  return a_.block(s, s, n, n);
}

Eigen::MatrixXd GMPMatrix::block_a(int j) const {
  const int s = block_start(j);
  const int t = block_start(j + 1);
  const int p = genus() + 1;
  if (j < 0 || t + p > size()) throw ConfigError("block index out of range");
  return a_.block(s, t, block_size(j), p);
}

Eigen::VectorXd GMPMatrix::tilde_c() const {
  const int p = genus() + 1;
  Eigen::VectorXd d(p);
  for (int a = 0; a < p; ++a) {
    const int slot = (k_ - 1 + a) % p + 1;
    d(a) = a == 0 ? 0.0 : c_.pole(slot).value();
  }
  return d;
}

StructureReport validate_structure(const GMPMatrix& a) {
  StructureReport r;
  const auto& m = a.dense();
  const int n = a.size();
  const int band = a.genus() + 1;
  r.symmetry_defect = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double nrm = std::max(a.norm(), 1e-300);
  double off = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) > band) off = std::max(off, std::abs(m(i, j)));
  r.bandwidth_residual = off / nrm;
  r.min_p0 = std::numeric_limits<double>::infinity();
  r.blocks_checked = a.block_count();
  for (int j = 1; j <= r.blocks_checked; ++j) {
    const Eigen::MatrixXd aj = a.block_a(j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(aj);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1 && sv(0) > 0.0) r.max_rank_one_ratio = std::max(r.max_rank_one_ratio, sv(1) / sv(0));
    r.min_p0 = std::min(r.min_p0, aj(0, 0));
    if (aj(0, 0) > 0.0)
      r.max_reconstruction_residual = std::max(r.max_reconstruction_residual, extract_pq(a, j).reconstruction_residual);
  }
  if (r.blocks_checked == 0) r.min_p0 = 0.0;
  return r;
}

GmpCoefficients extract_pq(const GMPMatrix& a, int j) {
  if (j < 1 || j > a.block_count()) throw ConfigError("GMP block index out of range");
  const int p = a.genus() + 1;
  const Eigen::MatrixXd aj = a.block_a(j);
  const Eigen::MatrixXd bj = a.block_b(j);
  const Eigen::VectorXd ct = a.tilde_c();
  GmpCoefficients out;
  out.p = aj.col(0);
  const double p0 = out.p(0);
  if (!(p0 > 1e-14 * std::max(a.norm(), 1e-300))) {
    std::ostringstream os;
    os << "degenerate GMP block " << j << ": (p_j)_0 = " << p0;
    throw InvariantViolation(os.str());
  }
  out.q = bj.col(0) / p0;
  // B_ab = ct_a delta_ab + q_a p_b for a >= b, mirrored above the diagonal.
  Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(p, p);
  for (int r = 0; r < p; ++r)
    for (int s = 0; s <= r; ++s) rec(r, s) = rec(s, r) = (r == s ? ct(r) : 0.0) + out.q(r) * out.p(s);
  // Relative to the matrix norm: symmetric measures can make B_j vanish identically.
  const double scale = std::max(a.norm(), 1e-300);
  out.reconstruction_residual = (bj - rec).cwiseAbs().maxCoeff() / scale;
  return out;
}

GMPMatrix build_gmp(const OrthoSystem& sys) {
  if (sys.poles().infinity_slot() == 0) throw DomainError("GMP build needs infinity among the poles");
  if (sys.measure().touches_infinity()) throw DomainError("GMP build needs a measure supported in the real line");
  Eigen::MatrixXd m = sys.multiplication([](const ExtendedReal& x) { return x.value(); });
  GMPMatrix a(sys.poles(), std::move(m));
  const StructureReport r = validate_structure(a);
  if (!r.ok()) {
    std::ostringstream os;
    os << "GMP structure check failed (bandwidth " << r.bandwidth_residual << ", rank-one " << r.max_rank_one_ratio
       << ", min p0 " << r.min_p0 << ", reconstruction " << r.max_reconstruction_residual << ")";
    throw NumericalFailure(os.str());
  }
  return a;
}

GMPMatrix resolvent_gmp(const Measure& mu, const PoleSequence& c, int ell, int n_max, const PrecisionPolicy& policy) {
  if (ell < 1 || ell > c.period()) throw ConfigError("resolvent slot out of range");
  const ExtendedReal cl = c.pole(ell);
  if (cl.is_infinite()) throw DomainError("resolvent pole must be finite");
  const MoebiusMap f = MoebiusMap::pole_to_infinity(cl.value());
  const Measure pushed = mu.pushforward(f);
  const PoleSequence image = c.image(f);
  const OrthoSystem sys = orthonormalize(pushed, image, n_max, policy);
  GMPMatrix r = build_gmp(sys);
  // f preserves orientation, so the sign pattern rho^n is trivial and the
  // recorded conjugation stays the identity; (p_j)_0 > 0 was checked by build_gmp.
  return r;
}

double beta(const GMPMatrix& a, int j) {
  const int n = j * (a.genus() + 1) + a.infinity_slot() % (a.genus() + 1);
  const int m = n + a.genus() + 1;
  if (j < 0 || m >= a.size()) throw ConfigError("beta index out of range");
  return a(n, m);
}

std::vector<double> beta_sequence(const GMPMatrix& a) {
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const int m = j * (a.genus() + 1) + a.infinity_slot() % (a.genus() + 1) + a.genus() + 1;
    if (m >= a.size()) break;
    out.push_back(beta(a, j));
  }
  return out;
}

const GMPMatrix& GmpFamily::for_slot(int k) const {
  if (a.poles().pole(k).is_infinite()) return a;
  auto it = resolvents.find(k);
  if (it == resolvents.end()) throw ConfigError("resolvent for the requested slot is missing");
  return it->second;
}

GmpFamily build_family(const Measure& mu, const PoleSequence& c, int n_max, const PrecisionPolicy& policy) {
  return build_family(orthonormalize(mu, c, n_max, policy), policy);
}

GmpFamily build_family(OrthoSystem sys, const PrecisionPolicy& policy) {
  GMPMatrix a = build_gmp(sys);
  GmpFamily fam{std::move(sys), std::move(a), {}};
  const PoleSequence& c = fam.system.poles();
  PrecisionPolicy p2 = policy;
  p2.start_bits = std::max(policy.start_bits, fam.system.precision_bits());
  p2.nodes_per_band = fam.system.nodes_per_band();
  for (int k = 1; k <= c.period(); ++k)
    if (c.pole(k).is_finite())
      fam.resolvents.emplace(k, resolvent_gmp(fam.system.measure(), c, k, fam.system.n_max(), p2));
  return fam;
}

double big_lambda(const GmpFamily& fam, int n) {
  const int g = fam.a.genus();
  const int k = fam.a.poles().slot_of(n);
  const GMPMatrix& m = fam.for_slot(k);
  if (n < 0 || n + g + 1 >= m.size()) throw ConfigError("Lambda index out of range");
  return m(n, n + g + 1);
}

LambdaIdentity lambda_identity(const GmpFamily& fam) {
  LambdaIdentity out;
  const int g = fam.a.genus();
  const int count = fam.system.n_max() - g;
  for (int n = 0; n < count; ++n) {
    const double lam = big_lambda(fam, n);
    out.lambda.push_back(lam);
    const double rel = std::abs(lam * fam.system.kappa(n + g + 1) / fam.system.kappa(n) - 1.0);
    out.relative_error.push_back(rel);
    out.max_relative_error = std::max(out.max_relative_error, rel);
  }
  return out;
}

}  // namespace ratgmp
