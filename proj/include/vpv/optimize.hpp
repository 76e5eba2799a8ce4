#pragma once

#include <cmath>
#include <functional>

namespace vpv {

struct ScalarMinimum {
  double argmin;
  double value;
};

// Golden-section search for a minimum of f on [a, b]; stops once the bracket
// is narrower than tol. Returns the best point evaluated.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol);

// Bisection for a sign change of f on [a, b]; f(a) and f(b) must differ in sign.
// Stops when the bracket is below rel_tol * max(|a|, |b|, tiny) or after max_iter halvings.
double bisect(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-14,
              int max_iter = 400);

}  // namespace vpv
