#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

namespace ratgmp {

// A point of the extended real line. Infinity is a tag, never a large float.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(implicit)

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  // Finite value; throws DomainError for infinity.
  double value() const;

  friend bool operator==(const ExtendedReal& x, const ExtendedReal& y) noexcept {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.value_ == y.value_;
  }

  // Chordal-style distance: |x-y| for finite points, 1/|x| style closeness to infinity.
  friend double distance(const ExtendedReal& x, const ExtendedReal& y) noexcept;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

// Local dilation of a real Moebius map at a point, in the r_k pole convention.
struct Dilation {
  double factor = 1.0;
  bool reflected = false;  // map reversed orientation; factor belongs to (-z) o f
};

// z -> (a z + b) / (c z + d) with real coefficients, normalized to |ad - bc| = 1.
class MoebiusMap {
 public:
  MoebiusMap() = default;
  MoebiusMap(double a, double b, double c, double d);

  static MoebiusMap identity() { return {}; }
  static MoebiusMap translation(double t) { return {1.0, t, 0.0, 1.0}; }
  static MoebiusMap scaling(double s) { return {s, 0.0, 0.0, 1.0}; }
  static MoebiusMap negation() { return {-1.0, 0.0, 0.0, 1.0}; }
  static MoebiusMap negative_reciprocal() { return {0.0, -1.0, 1.0, 0.0}; }
  // z -> 1/(w - z); sends the finite point w to infinity, orientation +1.
  static MoebiusMap pole_to_infinity(double w) { return {0.0, 1.0, -1.0, w}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }
  int orientation() const noexcept { return orientation_; }
  bool is_affine() const noexcept { return c_ == 0.0; }

  ExtendedReal apply(const ExtendedReal& x) const;
  // Complex application; throws DomainError at the finite pole.
  std::complex<double> apply(std::complex<double> z) const;
  // The point sent to infinity.
  ExtendedReal pole() const;

  Dilation derivative_at(const ExtendedReal& x) const;

  friend MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g);
  friend MoebiusMap invert(const MoebiusMap& f);
  // Coefficientwise equality up to the overall sign ambiguity.
  bool approx_equal(const MoebiusMap& other, double tol) const;

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
  int orientation_ = 1;
};

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g);
MoebiusMap invert(const MoebiusMap& f);

}  // namespace ratgmp
