#include "ratgmp/moebius.hpp"

#include <algorithm>

#include "ratgmp/errors.hpp"

namespace ratgmp {

double ExtendedReal::value() const {
  if (infinite_) throw DomainError("value() requested for the point at infinity");
  return value_;
}

double distance(const ExtendedReal& x, const ExtendedReal& y) noexcept {
  if (x.infinite_ && y.infinite_) return 0.0;
  if (x.infinite_) return 1.0 / std::max(std::abs(y.value_), 1e-300);
  if (y.infinite_) return 1.0 / std::max(std::abs(x.value_), 1e-300);
  return std::abs(x.value_ - y.value_);
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  if (x.is_infinite()) return os << "inf";
  return os << x.value();
}

MoebiusMap::MoebiusMap(double a, double b, double c, double d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
    throw DomainError("Moebius coefficients must be finite");
  const double det = a * d - b * c;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0 || std::abs(det) <= 1e-300 || std::abs(det) <= 1e-14 * scale * scale)
    throw DomainError("degenerate Moebius map (ad - bc = 0)");
  const double s = 1.0 / std::sqrt(std::abs(det));
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
  orientation_ = det > 0 ? 1 : -1;
  // Fix the projective sign: first nonzero of (c, d) positive.
  if (c_ < 0.0 || (c_ == 0.0 && d_ < 0.0)) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

ExtendedReal MoebiusMap::apply(const ExtendedReal& x) const {
  if (x.is_infinite()) {
    if (c_ == 0.0) return ExtendedReal::infinity();
    return a_ / c_;
  }
  const double z = x.value();
  const double den = c_ * z + d_;
  if (den == 0.0) return ExtendedReal::infinity();
  return (a_ * z + b_) / den;
}

std::complex<double> MoebiusMap::apply(std::complex<double> z) const {
  const std::complex<double> den = c_ * z + d_;
  if (den == 0.0) throw DomainError("complex point maps to infinity");
  return (a_ * z + b_) / den;
}

ExtendedReal MoebiusMap::pole() const {
  if (c_ == 0.0) return ExtendedReal::infinity();
  return -d_ / c_;
}

Dilation MoebiusMap::derivative_at(const ExtendedReal& x) const {
  if (orientation_ < 0) {
    Dilation r = compose(negation(), *this).derivative_at(x);
    r.reflected = true;
    return r;
  }
  // With ad - bc = 1 every case of the r_k-ratio limit is a square.
  if (x.is_infinite()) {
    if (c_ == 0.0) return {d_ * d_, false};
    return {1.0 / (c_ * c_), false};
  }
  const double z = x.value();
  const double den = c_ * z + d_;
  if (den == 0.0) return {c_ * c_, false};
  return {1.0 / (den * den), false};
}

MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
  return MoebiusMap(f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_,
                    f.c_ * g.a_ + f.d_ * g.c_, f.c_ * g.b_ + f.d_ * g.d_);
}

MoebiusMap invert(const MoebiusMap& f) { return MoebiusMap(f.d_, -f.b_, -f.c_, f.a_); }

bool MoebiusMap::approx_equal(const MoebiusMap& o, double tol) const {
  auto close = [&](int sgn) {
    return std::abs(a_ - sgn * o.a_) <= tol && std::abs(b_ - sgn * o.b_) <= tol &&
           std::abs(c_ - sgn * o.c_) <= tol && std::abs(d_ - sgn * o.d_) <= tol;
  };
  return orientation_ == o.orientation_ && (close(1) || close(-1));
}

}  // namespace ratgmp
