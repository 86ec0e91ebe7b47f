#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

#include "ratgmp/errors.hpp"

namespace ratgmp {

namespace mp = boost::multiprecision;

template <unsigned Digits10>
using mpfr_real = mp::number<mp::mpfr_float_backend<Digits10, mp::allocate_stack>, mp::et_off>;

// Nominal binary precisions 128, 256, 512, 768, 1024.
using real128 = mpfr_real<39>;
using real256 = mpfr_real<78>;
using real512 = mpfr_real<155>;
using real768 = mpfr_real<232>;
using real1024 = mpfr_real<309>;

inline constexpr std::array<int, 6> kPrecisionTiers = {53, 128, 256, 512, 768, 1024};

template <class Real>
constexpr int nominal_bits() {
  if constexpr (std::is_same_v<Real, double>) return 53;
  else if constexpr (std::is_same_v<Real, real128>) return 128;
  else if constexpr (std::is_same_v<Real, real256>) return 256;
  else if constexpr (std::is_same_v<Real, real512>) return 512;
  else if constexpr (std::is_same_v<Real, real768>) return 768;
  else return 1024;
}

// Smallest tier with at least `bits` bits.
inline int tier_for_bits(int bits) {
  for (int t : kPrecisionTiers)
    if (t >= bits) return t;
  throw ConfigError("precision of " + std::to_string(bits) + " bits exceeds the 1024-bit maximum");
}

// Calls f.template operator()<Real>() with Real matching the tier.
template <class F>
decltype(auto) dispatch_precision(int bits, F&& f) {
  switch (tier_for_bits(bits)) {
    case 53: return f.template operator()<double>();
    case 128: return f.template operator()<real128>();
    case 256: return f.template operator()<real256>();
    case 512: return f.template operator()<real512>();
    case 768: return f.template operator()<real768>();
    default: return f.template operator()<real1024>();
  }
}

template <class Real>
inline double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) return x;
  else return x.template convert_to<double>();
}

template <class Real>
inline Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

// Neumaier-compensated running sum for doubles, plain sum otherwise.
template <class Real>
class Accumulator {
 public:
  void add(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
      const double t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
      else comp_ += (x - t) + sum_;
      sum_ = t;
    } else {
      sum_ += x;
    }
  }
  // sum += a * b; fused with a single rounding for MPFR types.
  void add_product(const Real& a, const Real& b) {
    if constexpr (std::is_same_v<Real, double>) {
      add(a * b);
    } else {
      mpfr_fma(sum_.backend().data(), a.backend().data(), b.backend().data(), sum_.backend().data(),
               MPFR_RNDN);
    }
  }
  Real value() const {
    if constexpr (std::is_same_v<Real, double>) return sum_ + comp_;
    else return sum_;
  }

 private:
  Real sum_ = Real(0);
  Real comp_ = Real(0);
};

}  // namespace ratgmp
