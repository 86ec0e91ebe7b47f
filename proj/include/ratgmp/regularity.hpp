#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratgmp/discriminant.hpp"
#include "ratgmp/gmp.hpp"
#include "ratgmp/kernels.hpp"
#include "ratgmp/orf.hpp"
#include "ratgmp/potential.hpp"

namespace ratgmp {

// Half-line Jacobi matrix with diagonal b_1, b_2, ... and off-diagonal a_1, a_2, ...
struct JacobiMatrix {
  std::vector<double> a;
  std::vector<double> b;

  JacobiMatrix() = default;
  JacobiMatrix(std::vector<double> a, std::vector<double> b);

  int size() const noexcept { return static_cast<int>(b.size()); }
  // M x M truncation.
  Eigen::MatrixXd truncation(int m) const;

  static JacobiMatrix free(int n);
  // Jacobi matrix read off a g = 0 GMP matrix.
  static JacobiMatrix from_gmp(const GMPMatrix& a);
};

// Finite sample of the isospectral torus, each sample extended to `length` entries.
struct TorusSampleSet {
  std::vector<kernels::JacobiSample> samples;
  FiniteGapSet set;
  std::string method;

  // g = 0: the single constant matrix a = |E|/4, b = mid(E).
  static TorusSampleSet free_type(const FiniteGapSet& e, int length = 64);
  // E = [-beta, -alpha] u [alpha, beta]: period-2 matrices with b = (s, -s), a_1 a_2 = (beta^2 - alpha^2)/4,
  // s^2 + a_1^2 + a_2^2 = (alpha^2 + beta^2)/2, sampled at `count` torus angles.
  static TorusSampleSet symmetric_two_band(const FiniteGapSet& e, int count = 64, int length = 64);
};

enum class Verdict { ConsistentWithRegular, Inconsistent, Inconclusive };
const char* to_string(Verdict v) noexcept;
Verdict combine(const std::vector<Verdict>& vs) noexcept;

struct VerdictRule {
  double accept = 0.02;  // |last - target| within this: consistent
  double reject = 0.1;   // last and extrapolated both farther than this: inconsistent
  int tail_points = 8;   // points used by the c/n tail fit
};

// A sequence approaching a target, with a least-squares fit x_n = L + c/n on the tail.
struct Trend {
  std::vector<int> index;
  std::vector<double> value;
  double target = 0.0;
  double last = 0.0;
  double deviation = 0.0;  // last - target
  double extrapolated = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

Trend make_trend(std::vector<int> index, std::vector<double> value, double target, const VerdictRule& rule);

struct KappaSection {
  std::vector<double> lambdas;        // lambda_1..lambda_{g+1}
  std::vector<Trend> per_class;       // kappa_{n(j)}^{1/n(j)} vs lambda_k^{1/(g+1)}
  Trend product;                      // (prod_{l=1}^{g+1} kappa_{n+l})^{1/n} vs (prod lambda)^{1/(g+1)}
  std::vector<double> alpha;          // (1/n) log kappa_n at the last n of each class
  double lower_bound_slack = 0.0;     // min over classes of last - target
  bool lower_bound_ok = true;         // false when last and extrapolated both miss by the margin
  bool truncated = false;
  std::string criterion = "kappa_{n(j)}^{1/n(j)} -> lambda_k^{1/(g+1)} per residue class k";
  Verdict verdict = Verdict::Inconclusive;
};

struct BetaSection {
  double lambda = 0.0;           // lambda_k for the infinite slot
  Trend trend;                   // (prod_{l<=j} beta_l)^{1/j} vs lambda^{-1}
  double upper_bound_slack = 0.0;  // lambda^{-1} - value at the last j
  bool upper_bound_ok = true;      // false when last and extrapolated both exceed by the margin
  Verdict verdict = Verdict::Inconclusive;
};

struct GrowthPoint {
  std::complex<double> z;
  double calg = 0.0;
  std::vector<int> n;              // last index of each residue class
  std::vector<double> h;           // (1/n) log |tau_n(z)| for those n
  double min_deviation = 0.0;      // min over classes of h - calG
  double max_abs_deviation = 0.0;
  double class_spread = 0.0;       // max h - min h across classes
};

struct GrowthSection {
  std::vector<GrowthPoint> points;
  double lower_bound_slack = 0.0;  // min over points of min_deviation
  bool lower_bound_ok = true;
  double max_class_spread = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct ZeroDistSection {
  std::vector<int> n;
  std::vector<double> distance;  // sup-CDF distance between nu_n and rho
  std::vector<int> zero_count;   // zeros in the extended line
  bool mass_bound_ok = true;     // zero_count >= n - g
  bool trend_ok = true;          // distance[i+1] <= 1.2 distance[i]
};

struct RegularityOptions {
  VerdictRule rule;
  double lower_bound_margin = 0.05;
  double beta_bound_margin = 0.02;
  double growth_accept = 0.05;
  std::vector<std::complex<double>> z_grid;  // empty: default_growth_grid
  std::vector<int> zero_ns;                  // empty: no zero-distribution section
};

// Ten real positions over the hull of E widened by a quarter diameter, at two heights.
std::vector<std::complex<double>> default_growth_grid(const FiniteGapSet& e);

KappaSection kappa_diagnostic(const OrthoSystem& sys, const GreenEvaluator& ge, const RegularityOptions& opt = {});
BetaSection beta_diagnostic(const GMPMatrix& a, const GreenEvaluator& ge, const RegularityOptions& opt = {});
GrowthSection green_growth_check(const OrthoSystem& sys, const GreenEvaluator& ge,
                                 const std::vector<std::complex<double>>& z_grid, const RegularityOptions& opt = {});

double cdf_distance(const std::vector<ExtendedReal>& zeros, int n, const Measure& rho);
ZeroDistSection zero_dist_diagnostic(const OrthoSystem& sys, const Measure& rho, const std::vector<int>& ns);

struct NevaiDistance {
  double value = 0.0;
  double tail_bound = 0.0;  // e^{-K}/(e-1) times the summed sup norms
  int horizon = 40;
};

NevaiDistance nevai_distance(const JacobiMatrix& j, int m, const TorusSampleSet& t, int horizon = 40);

struct CesaroSection {
  int n = 0;
  int horizon = 40;
  double l1 = 0.0;          // (1/N) sum_m d_m
  double l2 = 0.0;          // (1/N) sum_m d_m^2
  double tail_bound = 0.0;
  bool cauchy_schwarz_ok = true;  // l1^2 <= l2 <= sup d * l1
  std::optional<double> block_l1;  // (1/N) sum |w_l| + |v_l - I|
  std::optional<double> block_l2;  // (1/N) sum |w_l|^2 + |v_l - I|^2
};

CesaroSection cesaro_stat(const JacobiMatrix& j, const TorusSampleSet& t, int n, int horizon = 40,
                          const BlockJacobi* blocks = nullptr,
                          kernels::Exec exec = kernels::Exec::Parallel);

struct SparseStats {
  int n = 0;
  double delta = 0.0;
  double average = 0.0;  // (1/N) sum |f_m|
  double density = 0.0;  // #{m <= N : |f_m| >= delta} / N
  bool markov_ok = true; // density <= average / delta
};

SparseStats sparse_stats(const std::vector<double>& f, double delta, int n);

struct RankOneShift {
  double t = 0.0;
  double margin = 0.0;  // min distance from finite poles to the shifted truncation spectrum
};

// Scans t = 0, 0.1, -0.1, 0.2, ... and returns the first shift of J_{11} keeping every
// finite pole at least `margin` away from the M x M truncation spectrum.
RankOneShift rank_one_shift(const JacobiMatrix& j, const PoleSequence& c, int m, double margin = 1e-3,
                            double step = 0.1, int max_steps = 100);

struct RegularityReport {
  std::optional<KappaSection> kappa;
  std::optional<BetaSection> beta;
  std::optional<GrowthSection> growth;
  std::optional<ZeroDistSection> zeros;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

// Runs the kappa and growth sections, the beta section when a GMP matrix is given and the
// zero section when opt.zero_ns is set. Lower-bound violations beyond their margins raise
// NumericalFailure instead of producing a verdict.
RegularityReport assess(const OrthoSystem& sys, const GMPMatrix* a, const GreenEvaluator& ge,
                        const RegularityOptions& opt = {});

}  // namespace ratgmp
