#include "vpv/ks_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vpv/distributions.hpp"
#include "vpv/errors.hpp"
#include "vpv/optimize.hpp"

namespace vpv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 512;
constexpr double kThetaTol = 1e-8;

bool positive_parameter(NullFamily family) { return family != NullFamily::NormalMeanUnitVar; }

// Multiplies m x m matrices, a and b, into c.
void matrix_multiply(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& c,
                     int m) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a[i * m + k] * b[k * m + j];
      c[i * m + j] = s;
    }
  }
}

// v = a^n with a decimal exponent carried in ev to keep entries in range.
void matrix_power(const std::vector<double>& a, int ea, std::vector<double>& v, int& ev, int m, int n) {
  if (n == 1) {
    v = a;
    ev = ea;
    return;
  }
  matrix_power(a, ea, v, ev, m, n / 2);
  std::vector<double> b(static_cast<std::size_t>(m) * m);
  matrix_multiply(v, v, b, m);
  int eb = 2 * ev;
  if (n % 2 == 0) {
    v = b;
    ev = eb;
  } else {
    matrix_multiply(a, b, v, m);
    ev = ea + eb;
  }
  const int centre = (m / 2) * m + m / 2;
  if (v[centre] > 1e140) {
    for (auto& x : v) x *= 1e-140;
    ev += 140;
  }
}

// Minimizes the KS distance over a grid in (possibly log-) parameter space
// followed by golden-section refinement around the best grid point.
KsMinimum grid_then_golden(const Sample& sample, NullFamily family, double lo, double hi, bool log_scale) {
  auto to_theta = [&](double t) { return log_scale ? std::exp(t) : t; };
  const double a = log_scale ? std::log(lo) : lo;
  const double b = log_scale ? std::log(hi) : hi;

  double best_t = a;
  double best_d = kInf;
  std::vector<double> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = a + (b - a) * i / (kGridPoints - 1);
    const double d = ks_distance(sample, family, to_theta(grid[i]));
    if (d < best_d) {
      best_d = d;
      best_t = grid[i];
    }
  }
  const auto k = static_cast<int>(std::lower_bound(grid.begin(), grid.end(), best_t) - grid.begin());
  const double left = grid[std::max(k - 1, 0)];
  const double right = grid[std::min(k + 1, kGridPoints - 1)];

  // In log space the tolerance is relative to theta.
  const double tol = log_scale ? kThetaTol : kThetaTol * std::max(1.0, std::abs(best_t));
  auto objective = [&](double t) { return ks_distance(sample, family, to_theta(t)); };
  const auto refined = golden_section_minimize(objective, left, right, tol);
  if (refined.value < best_d) {
    best_d = refined.value;
    best_t = refined.argmin;
  }
  return {to_theta(best_t), best_d, MinimizationMethod::Numeric};
}

KsMinimum single_observation_minimum(double x, NullFamily family, std::optional<Interval> domain) {
  auto clamp_to_domain = [&](double theta) {
    return domain ? std::clamp(theta, domain->lo, domain->hi) : theta;
  };
  const Sample one({x});
  switch (family) {
    case NullFamily::ExpRate: {
      // D_1 decreases up to ln 2 / x and increases afterwards.
      // Inside the domain the minimum is exactly 0.5; theta * x may round away from ln 2.
      const double free_theta = M_LN2 / x;
      const double theta = clamp_to_domain(free_theta);
      const double d = theta == free_theta ? 0.5 : ks_distance(one, family, theta);
      return {theta, d, MinimizationMethod::ClosedForm};
    }
    case NullFamily::NormalMeanUnitVar: {
      const double theta = clamp_to_domain(x);
      const double d = domain ? ks_distance(one, family, theta) : 0.5;
      return {theta, d, MinimizationMethod::ClosedForm};
    }
    case NullFamily::NormalScaleZeroMean: {
      // D_1 is decreasing in theta; the infimum 0.5 is approached as theta -> inf.
      if (!domain) return {kInf, 0.5, MinimizationMethod::ClosedForm};
      return {domain->hi, ks_distance(one, family, domain->hi), MinimizationMethod::ClosedForm};
    }
  }
  throw DomainError("unknown null family");
}

}  // namespace

std::string to_string(NullFamily family) {
  switch (family) {
    case NullFamily::ExpRate:
      return "exp-rate";
    case NullFamily::NormalMeanUnitVar:
      return "normal-mean";
    case NullFamily::NormalScaleZeroMean:
      return "normal-scale";
  }
  return "unknown";
}

NullFamily parse_null_family(const std::string& name) {
  if (name == "exp-rate" || name == "exp") return NullFamily::ExpRate;
  if (name == "normal-mean") return NullFamily::NormalMeanUnitVar;
  if (name == "normal-scale") return NullFamily::NormalScaleZeroMean;
  throw ParameterError("unknown null family '" + name + "' (expected exp-rate, normal-mean or normal-scale)");
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("Sample: observations must be finite");
  }
  std::sort(values_.begin(), values_.end());
}

double Sample::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double Sample::mean() const {
  if (values_.empty()) throw DataError("Sample: empty");
  return sum() / static_cast<double>(values_.size());
}

double Sample::sum_of_squares() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

bool in_parameter_space(NullFamily family, double theta) {
  if (positive_parameter(family)) return theta > 0 && std::isfinite(theta);
  return std::isfinite(theta);
}

void check_sample(const Sample& sample, NullFamily family) {
  if (sample.size() == 0) throw DomainError("sample must contain at least one observation");
  if (family == NullFamily::ExpRate && sample[0] <= 0)
    throw DomainError("exp-rate null requires strictly positive observations");
  if (family == NullFamily::NormalScaleZeroMean && sample.sum_of_squares() == 0)
    throw DataError("normal-scale null requires a nonzero observation");
}

double null_mle(const Sample& sample, NullFamily family) {
  check_sample(sample, family);
  const auto n = static_cast<double>(sample.size());
  switch (family) {
    case NullFamily::ExpRate:
      return n / sample.sum();
    case NullFamily::NormalMeanUnitVar:
      return sample.mean();
    case NullFamily::NormalScaleZeroMean:
      return std::sqrt(sample.sum_of_squares() / n);
  }
  throw DomainError("unknown null family");
}

double null_cdf(NullFamily family, double theta, double x) {
  switch (family) {
    case NullFamily::ExpRate:
      if (std::isinf(theta)) return x > 0 ? 1.0 : 0.0;
      return x <= 0 ? 0.0 : -std::expm1(-theta * x);
    case NullFamily::NormalMeanUnitVar:
      return normal_cdf(x - theta);
    case NullFamily::NormalScaleZeroMean:
      if (std::isinf(theta)) return 0.5;
      return normal_cdf(x / theta);
  }
  throw DomainError("unknown null family");
}

double empirical_cdf(const Sample& sample, double u) {
  if (sample.size() == 0) return 0.0;
  const auto v = sample.values();
  const auto count = std::upper_bound(v.begin(), v.end(), u) - v.begin();
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

double ks_distance(const Sample& sample, NullFamily family, double theta) {
  const bool scale_limit = family == NullFamily::NormalScaleZeroMean && theta == kInf;
  if (!in_parameter_space(family, theta) && !scale_limit)
    throw DomainError("ks_distance: theta outside the parameter space of " + to_string(family));
  const auto v = sample.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = null_cdf(family, theta, v[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

KsMinimum infimum_ks(const Sample& sample, NullFamily family, std::optional<Interval> domain) {
  check_sample(sample, family);
  if (domain) {
    if (!(domain->lo < domain->hi)) throw DomainError("infimum_ks: interval requires lo < hi");
    if (positive_parameter(family)) {
      if (domain->hi <= 0) throw DomainError("infimum_ks: interval does not meet the parameter space");
      domain->lo = std::max(domain->lo, 0.0);
    }
  }
  if (sample.size() == 1) return single_observation_minimum(sample[0], family, domain);

  const bool log_scale = positive_parameter(family);
  if (domain) {
    double lo = domain->lo;
    // An open lower end at 0 is bracketed from a tiny fraction of hi.
    if (log_scale && lo <= 0) lo = domain->hi * 1e-12;
    return grid_then_golden(sample, family, lo, domain->hi, log_scale);
  }

  double lo, hi;
  const double mle = null_mle(sample, family);
  if (log_scale) {
    lo = mle / 50.0;
    hi = mle * 50.0;
  } else {
    const double range = sample[sample.size() - 1] - sample[0];
    const double half_width = std::max(10.0 * range / std::sqrt(static_cast<double>(sample.size())), 1.0);
    lo = mle - half_width;
    hi = mle + half_width;
  }
  KsMinimum best = grid_then_golden(sample, family, lo, hi, log_scale);
  if (family == NullFamily::NormalScaleZeroMean && best.d_star >= 0.5) {
    // As theta -> inf every F_0(X_i) -> 1/2 and the distance tends to 1/2.
    best = {kInf, 0.5, MinimizationMethod::Numeric};
  }
  return best;
}

double kolmogorov_null_cdf(int n, double d) {
  if (n < 1) throw DomainError("kolmogorov_null_cdf: n must be >= 1");
  if (std::isnan(d)) throw DomainError("kolmogorov_null_cdf: d is NaN");
  if (d >= 1.0) return 1.0;
  if (d <= 0.5 / n) return 0.0;

  const int k = static_cast<int>(n * d) + 1;
  const int m = 2 * k - 1;
  const double h = k - n * d;
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a[i * m + j] = (i - j + 1 < 0) ? 0.0 : 1.0;
  for (int i = 0; i < m; ++i) {
    a[i * m] -= std::pow(h, i + 1);
    a[(m - 1) * m + i] -= std::pow(h, m - i);
  }
  a[(m - 1) * m] += (2 * h - 1 > 0) ? std::pow(2 * h - 1, m) : 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i - j + 1 > 0)
        for (int g = 1; g <= i - j + 1; ++g) a[i * m + j] /= g;

  std::vector<double> q;
  int eq = 0;
  matrix_power(a, 0, q, eq, m, n);
  double s = q[(k - 1) * m + k - 1];
  for (int i = 1; i <= n; ++i) {
    s = s * i / n;
    if (s < 1e-140) {
      s *= 1e140;
      eq -= 140;
    }
  }
  s *= std::pow(10.0, eq);
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace vpv
