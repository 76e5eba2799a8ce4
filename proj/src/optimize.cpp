#include "vpv/optimize.hpp"

#include <algorithm>

#include "vpv/errors.hpp"

namespace vpv {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  if (a > b) std::swap(a, b);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  ScalarMinimum best = fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
  // The cap also stops tolerances below the double spacing near a and b.
  for (int it = 0; it < 300 && b - a > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

double bisect(const std::function<double(double)>& f, double a, double b, double rel_tol, int max_iter) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa < 0) == (fb < 0)) throw NumericError("bisect: root is not bracketed", std::min(std::abs(fa), std::abs(fb)));
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (std::abs(b - a) <= rel_tol * std::max({std::abs(a), std::abs(b), 1e-300})) break;
  }
  return 0.5 * (a + b);
}

}  // namespace vpv
