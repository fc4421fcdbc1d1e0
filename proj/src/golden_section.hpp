#pragma once

#include <cmath>
#include <utility>

namespace demag {

struct ScalarMaximum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops when the bracket is narrower than tol and returns the best
/// interior point evaluated.
template <class F>
ScalarMaximum golden_section_maximize(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarMaximum{c, fc} : ScalarMaximum{d, fd};
}

}  // namespace demag
