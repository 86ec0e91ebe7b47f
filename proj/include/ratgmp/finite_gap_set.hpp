#pragma once

#include <vector>

#include "ratgmp/moebius.hpp"

namespace ratgmp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
  double half() const noexcept { return 0.5 * (hi - lo); }
  bool contains(double x, double margin = 0.0) const noexcept {
    return x >= lo - margin && x <= hi + margin;
  }
};

// Compact union of g+1 disjoint closed intervals, sorted left to right.
class FiniteGapSet {
 public:
  explicit FiniteGapSet(std::vector<Interval> bands);

  int genus() const noexcept { return static_cast<int>(bands_.size()) - 1; }
  const std::vector<Interval>& bands() const noexcept { return bands_; }
  // Bounded gaps (a_j, b_{j+1}) between consecutive bands.
  std::vector<Interval> gaps() const;
  // All 2g+2 endpoints in increasing order.
  std::vector<double> endpoints() const;

  double lower() const noexcept { return bands_.front().lo; }
  double upper() const noexcept { return bands_.back().hi; }
  double diameter() const noexcept { return upper() - lower(); }
  // Typical length scale used for relative tolerances.
  double scale() const noexcept;

  bool contains(double x, double margin = 0.0) const noexcept;
  bool contains(const ExtendedReal& x, double margin = 0.0) const noexcept;
  // Index of the bounded gap holding x, or -1.
  int gap_index(double x) const noexcept;

  // f(E); throws DomainError when the pole of f lies on E.
  FiniteGapSet image(const MoebiusMap& f) const;

  friend bool operator==(const FiniteGapSet& a, const FiniteGapSet& b) noexcept;

 private:
  std::vector<Interval> bands_;
};

}  // namespace ratgmp
