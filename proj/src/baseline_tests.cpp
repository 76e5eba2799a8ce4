#include "vpv/baseline_tests.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <boost/math/distributions/students_t.hpp>

#include "vpv/distributions.hpp"
#include "vpv/errors.hpp"

namespace vpv {
namespace {

double poly(std::initializer_list<double> c, double x) {
  double result = 0.0;
  double power = 1.0;
  for (double coef : c) {
    result += coef * power;
    power *= x;
  }
  return result;
}

template <class Value, class Make>
const Value& cached(std::map<std::size_t, Value>& entries, std::shared_mutex& mutex, std::size_t key, Make make) {
  {
    std::shared_lock lock(mutex);
    if (auto it = entries.find(key); it != entries.end()) return it->second;
  }
  Value value = make();
  std::unique_lock lock(mutex);
  return entries.try_emplace(key, std::move(value)).first->second;
}

double sample_variance(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

double t_p_value(double t, double df, Alternative alternative) {
  const boost::math::students_t dist(df);
  switch (alternative) {
    case Alternative::Greater:
      return boost::math::cdf(boost::math::complement(dist, t));
    case Alternative::Less:
      return boost::math::cdf(dist, t);
    case Alternative::TwoSided:
      return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  }
  return 1.0;
}

}  // namespace

const std::vector<double>& shapiro_wilk_coefficients(std::size_t n) {
  static std::map<std::size_t, std::vector<double>> entries;
  static std::shared_mutex mutex;
  if (n < 3 || n > 5000) throw DomainError("shapiro_wilk: n must lie in [3, 5000]");
  return cached(entries, mutex, n, [n] {
    std::vector<double> a(n, 0.0);
    if (n == 3) {
      a[0] = -M_SQRT1_2;
      a[2] = M_SQRT1_2;
      return a;
    }
    const double an = static_cast<double>(n);
    std::vector<double> m(n);
    double mm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      mm += m[i] * m[i];
    }
    const double u = 1.0 / std::sqrt(an);
    const double an_last = m[n - 1] / std::sqrt(mm) +
                           poly({0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056}, u);
    double phi;
    std::size_t first_free;
    if (n > 5) {
      const double an_prev = m[n - 2] / std::sqrt(mm) +
                             poly({0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633}, u);
      phi = (mm - 2 * m[n - 1] * m[n - 1] - 2 * m[n - 2] * m[n - 2]) /
            (1 - 2 * an_last * an_last - 2 * an_prev * an_prev);
      a[n - 2] = an_prev;
      a[1] = -an_prev;
      first_free = 2;
    } else {
      phi = (mm - 2 * m[n - 1] * m[n - 1]) / (1 - 2 * an_last * an_last);
      first_free = 1;
    }
    a[n - 1] = an_last;
    a[0] = -an_last;
    for (std::size_t i = first_free; i < n - first_free; ++i) a[i] = m[i] / std::sqrt(phi);
    return a;
  });
}

TestOutcome shapiro_wilk(const Sample& sample) {
  const std::size_t n = sample.size();
  const auto& a = shapiro_wilk_coefficients(n);
  const auto x = sample.values();
  if (x[n - 1] - x[0] <= 0) throw DataError("shapiro_wilk: sample has zero variance");

  const double mean = sample.mean();
  double ssq = 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ssq += (x[i] - mean) * (x[i] - mean);
    num += a[i] * x[i];
  }
  const double w = std::min(num * num / ssq, 1.0);
  const double an = static_cast<double>(n);

  if (n == 3) {
    constexpr double six_over_pi = 1.909859317102744;
    constexpr double asin_sqrt_3_4 = 1.0471975511965979;
    const double p = six_over_pi * (std::asin(std::sqrt(w)) - asin_sqrt_3_4);
    return {w, std::clamp(p, 0.0, 1.0)};
  }

  double y = std::log1p(-w);
  double mu, sigma;
  if (n <= 11) {
    const double gamma = poly({-2.273, 0.459}, an);
    if (y >= gamma) return {w, 1e-19};
    y = -std::log(gamma - y);
    mu = poly({0.5440, -0.39978, 0.025054, -6.714e-4}, an);
    sigma = std::exp(poly({1.3822, -0.77857, 0.062767, -0.0020322}, an));
  } else {
    const double ln_n = std::log(an);
    mu = poly({-1.5861, -0.31082, -0.083751, 0.0038915}, ln_n);
    sigma = std::exp(poly({-0.4803, -0.082676, 0.0030302}, ln_n));
  }
  return {w, normal_cdf(-(y - mu) / sigma)};
}

TestOutcome t_test(const Sample& x, const std::optional<Sample>& y, double mu0, TVariant variant,
                   Alternative alternative) {
  const auto nx = static_cast<double>(x.size());
  if (x.size() < 2) throw DomainError("t_test: need at least two observations");
  const double mx = x.mean();
  const double vx = sample_variance(x.values(), mx);

  if (variant == TVariant::OneSample) {
    if (!(vx > 0)) throw DataError("t_test: zero variance");
    const double t = (mx - mu0) / std::sqrt(vx / nx);
    const double df = nx - 1;
    return {t, t_p_value(t, df, alternative), df};
  }

  if (!y || y->size() < 2) throw DomainError("t_test: two-sample variants need y with at least two observations");
  const auto ny = static_cast<double>(y->size());
  const double my = y->mean();
  const double vy = sample_variance(y->values(), my);
  double t, df;
  if (variant == TVariant::Pooled) {
    df = nx + ny - 2;
    const double pooled = ((nx - 1) * vx + (ny - 1) * vy) / df;
    if (!(pooled > 0)) throw DataError("t_test: zero pooled variance");
    t = (mx - my - mu0) / std::sqrt(pooled * (1 / nx + 1 / ny));
  } else {
    const double sx = vx / nx;
    const double sy = vy / ny;
    if (!(sx + sy > 0)) throw DataError("t_test: zero variance");
    t = (mx - my - mu0) / std::sqrt(sx + sy);
    df = (sx + sy) * (sx + sy) / (sx * sx / (nx - 1) + sy * sy / (ny - 1));
  }
  return {t, t_p_value(t, df, alternative), df};
}

Decision swt_composite(const Sample& sample, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("swt_composite: alpha must lie in (0, 1)");
  const double p_sw = shapiro_wilk(sample).p_value;
  const double p_t = t_test(sample, std::nullopt, 0.0, TVariant::OneSample, Alternative::TwoSided).p_value;
  return std::min(p_sw, p_t) <= alpha / 2 ? Decision::Reject : Decision::Retain;
}

const std::vector<double>& signed_rank_null_pmf(int n) {
  static std::map<std::size_t, std::vector<double>> entries;
  static std::shared_mutex mutex;
  if (n < 1 || n > 1000) throw DomainError("signed_rank_null_pmf: n must lie in [1, 1000]");
  return cached(entries, mutex, static_cast<std::size_t>(n), [n] {
    const int max_v = n * (n + 1) / 2;
    // counts[v] / 2^n, accumulated one rank at a time.
    std::vector<double> pmf(max_v + 1, 0.0);
    pmf[0] = 1.0;
    int reach = 0;
    for (int k = 1; k <= n; ++k) {
      reach += k;
      for (int v = reach; v >= k; --v) pmf[v] = 0.5 * (pmf[v] + pmf[v - k]);
      for (int v = k - 1; v >= 0; --v) pmf[v] *= 0.5;
    }
    return pmf;
  });
}

TestOutcome wilcoxon_signed_rank(const Sample& sample, double mu0, Alternative alternative) {
  if (sample.size() < 5) throw DomainError("wilcoxon_signed_rank: need at least five observations");
  std::vector<double> d;
  d.reserve(sample.size());
  for (double x : sample.values())
    if (x != mu0) d.push_back(x - mu0);
  if (d.empty()) throw DataError("wilcoxon_signed_rank: every observation equals mu0");

  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

  double v = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j + 2);
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k <= j; ++k)
      if (d[order[k]] > 0) v += rank;
    i = j + 1;
  }

  const double dn = static_cast<double>(n);
  if (n <= 25 && tie_term == 0) {
    const auto& pmf = signed_rank_null_pmf(static_cast<int>(n));
    const auto vi = static_cast<std::size_t>(std::llround(v));
    double lower = 0.0, upper = 0.0;
    for (std::size_t k = 0; k <= vi; ++k) lower += pmf[k];
    for (std::size_t k = vi; k < pmf.size(); ++k) upper += pmf[k];
    double p = 1.0;
    switch (alternative) {
      case Alternative::Greater:
        p = upper;
        break;
      case Alternative::Less:
        p = lower;
        break;
      case Alternative::TwoSided:
        p = std::min(1.0, 2.0 * std::min(lower, upper));
        break;
    }
    return {v, std::min(p, 1.0)};
  }

  const double mean = dn * (dn + 1) / 4;
  const double var = dn * (dn + 1) * (2 * dn + 1) / 24 - tie_term / 48;
  const double diff = v - mean;
  double correction = 0.0;
  switch (alternative) {
    case Alternative::Greater:
      correction = 0.5;
      break;
    case Alternative::Less:
      correction = -0.5;
      break;
    case Alternative::TwoSided:
      correction = diff > 0 ? 0.5 : (diff < 0 ? -0.5 : 0.0);
      break;
  }
  const double z = (diff - correction) / std::sqrt(var);
  double p = 1.0;
  switch (alternative) {
    case Alternative::Greater:
      p = normal_cdf(-z);
      break;
    case Alternative::Less:
      p = normal_cdf(z);
      break;
    case Alternative::TwoSided:
      p = std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
      break;
  }
  return {v, p};
}

}  // namespace vpv
