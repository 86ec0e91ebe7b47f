#include "ratgmp/finite_gap_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratgmp/errors.hpp"

namespace ratgmp {

FiniteGapSet::FiniteGapSet(std::vector<Interval> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw DomainError("finite gap set needs at least one band");
  std::sort(bands_.begin(), bands_.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const auto& b = bands_[i];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw DomainError("band endpoints must be finite");
    if (!(b.lo < b.hi)) throw DomainError("band " + std::to_string(i) + " has empty interior");
    if (i > 0 && !(bands_[i - 1].hi < b.lo)) throw DomainError("bands overlap or touch");
  }
}

std::vector<Interval> FiniteGapSet::gaps() const {
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < bands_.size(); ++i) out.push_back({bands_[i].hi, bands_[i + 1].lo});
  return out;
}

std::vector<double> FiniteGapSet::endpoints() const {
  std::vector<double> e;
  e.reserve(2 * bands_.size());
  for (const auto& b : bands_) {
    e.push_back(b.lo);
    e.push_back(b.hi);
  }
  return e;
}

double FiniteGapSet::scale() const noexcept {
  return std::max({diameter(), std::abs(lower()), std::abs(upper()), 1e-300});
}

bool FiniteGapSet::contains(double x, double margin) const noexcept {
  return std::any_of(bands_.begin(), bands_.end(),
                     [&](const Interval& b) { return b.contains(x, margin); });
}

bool FiniteGapSet::contains(const ExtendedReal& x, double margin) const noexcept {
  return x.is_finite() && contains(x.value(), margin);
}

int FiniteGapSet::gap_index(double x) const noexcept {
  for (std::size_t i = 0; i + 1 < bands_.size(); ++i)
    if (x > bands_[i].hi && x < bands_[i + 1].lo) return static_cast<int>(i);
  return -1;
}

FiniteGapSet FiniteGapSet::image(const MoebiusMap& f) const {
  const ExtendedReal p = f.pole();
  if (p.is_finite() && contains(p.value()))
    throw DomainError("Moebius pole lies on the finite gap set");
  std::vector<Interval> out;
  out.reserve(bands_.size());
  for (const auto& b : bands_) {
    const double u = f.apply(ExtendedReal(b.lo)).value();
    const double v = f.apply(ExtendedReal(b.hi)).value();
    out.push_back({std::min(u, v), std::max(u, v)});
  }
  return FiniteGapSet(std::move(out));
}

bool operator==(const FiniteGapSet& a, const FiniteGapSet& b) noexcept {
  if (a.bands_.size() != b.bands_.size()) return false;
  for (std::size_t i = 0; i < a.bands_.size(); ++i)
    if (a.bands_[i].lo != b.bands_[i].lo || a.bands_[i].hi != b.bands_[i].hi) return false;
  return true;
}

}  // namespace ratgmp
