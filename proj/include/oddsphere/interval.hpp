#pragma once

#include <algorithm>
#include <limits>
#include <ostream>

namespace oddsphere {

/// Closed interval [lo, hi] enclosing an unknown real quantity.
/// hi may be +infinity when no finite upper bound is available.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool bounded() const { return hi < std::numeric_limits<double>::infinity(); }
};

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << '[' << iv.lo << ", " << iv.hi << ']';
}

}  // namespace oddsphere
