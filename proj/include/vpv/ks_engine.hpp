#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vpv {

// Composite null hypotheses with a scalar nuisance parameter theta.
enum class NullFamily {
  ExpRate,              // X ~ theta * exp(-theta x), theta > 0
  NormalMeanUnitVar,    // X ~ N(theta, 1), theta real
  NormalScaleZeroMean,  // X ~ N(0, theta^2), theta > 0
};

std::string to_string(NullFamily family);
NullFamily parse_null_family(const std::string& name);

// Observations kept sorted ascending.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double mean() const;
  double sum() const;
  double sum_of_squares() const;

 private:
  std::vector<double> values_;
};

// Closed parameter interval [lo, hi].
struct Interval {
  double lo;
  double hi;
};

enum class MinimizationMethod { ClosedForm, Numeric };

struct KsMinimum {
  double theta_star;  // may be +inf for NormalScaleZeroMean
  double d_star;
  MinimizationMethod method;
};

bool in_parameter_space(NullFamily family, double theta);
// Throws DomainError when the sample cannot come from the family (empty, or
// non-positive values under ExpRate).
void check_sample(const Sample& sample, NullFamily family);

// Maximum likelihood estimate of theta under the null.
double null_mle(const Sample& sample, NullFamily family);

// F_0(x; theta).
double null_cdf(NullFamily family, double theta, double x);

double empirical_cdf(const Sample& sample, double u);

// sup_u |F_0(u; theta) - F_n(u)|, evaluated exactly at the order statistics.
double ks_distance(const Sample& sample, NullFamily family, double theta);

// inf over theta of ks_distance; domain = nullopt means the full parameter space.
KsMinimum infimum_ks(const Sample& sample, NullFamily family,
                     std::optional<Interval> domain = std::nullopt);

// Exact Pr(D_n < d) for the simple-null KS statistic (Marsaglia, Tsang & Wang 2003).
double kolmogorov_null_cdf(int n, double d);

}  // namespace vpv
