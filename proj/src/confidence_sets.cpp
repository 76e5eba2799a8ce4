#include "vpv/confidence_sets.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include <boost/math/special_functions/gamma.hpp>

#include "vpv/distributions.hpp"
#include "vpv/errors.hpp"
#include "vpv/optimize.hpp"

namespace vpv {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

// g(v) = v - 1 - ln v >= 0 with its minimum 0 at v = 1. Every pivot function
// used here is log h(u) = weight * g(u / scale).
double g(double v) { return v - 1.0 - std::log(v); }

// Roots v0 < 1 < v1 of g(v) = level (level > 0).
std::pair<double, double> unit_roots(double level) {
  // Lower root in log space: g(e^w) = e^w - 1 - w, decreasing for w < 0.
  double w_lo = -1.0;
  while (std::expm1(w_lo) - w_lo < level) w_lo *= 2.0;
  const double w0 = bisect([&](double w) { return std::expm1(w) - w - level; }, w_lo, 0.0, 1e-16);
  double v_hi = 2.0;
  while (g(v_hi) < level) v_hi *= 2.0;
  const double v1 = bisect([&](double v) { return g(v) - level; }, 1.0, v_hi, 1e-16);
  return {std::exp(w0), v1};
}

struct PivotSpec {
  double weight;                                   // log h(u) = weight * g(u / scale)
  double scale;
  std::function<double(double, double)> miss;      // Pr(u < u0) + Pr(u > u1)
};

PivotThreshold solve_threshold(const PivotSpec& spec, double beta) {
  auto roots_for = [&](double log_a) {
    const auto [v0, v1] = unit_roots(log_a / spec.weight);
    return RootPair{spec.scale * v0, spec.scale * v1};
  };
  auto excess = [&](double log_a) {
    const RootPair r = roots_for(log_a);
    return spec.miss(r.u0, r.u1) - beta;
  };
  // miss decreases from 1 (A -> 1+) to 0 (A -> inf) as log A grows.
  double log_a_max = 1.0;
  while (excess(log_a_max) > 0) {
    log_a_max *= 2.0;
    if (log_a_max > 1e6) throw NumericError("pivot threshold: failed to bracket A_beta", excess(log_a_max));
  }
  double log_a_min = log_a_max * 0.5;
  while (log_a_min > 1e-300 && excess(log_a_min) < 0) log_a_min *= 0.5;
  const double log_a = bisect(excess, log_a_min, log_a_max, 1e-15);
  const RootPair roots = roots_for(log_a);
  const double residual = spec.miss(roots.u0, roots.u1) - beta;
  if (std::abs(residual) > 1e-9) throw NumericError("pivot threshold: coverage equation not met", residual);
  return {std::exp(log_a), roots};
}

struct ThresholdCache {
  std::shared_mutex mutex;
  std::map<std::tuple<int, int, double>, PivotThreshold> entries;
};

ThresholdCache& threshold_cache() {
  static ThresholdCache cache;
  return cache;
}

}  // namespace

RootPair solve_exp_system(double beta) {
  check_beta(beta);
  const PivotSpec spec{1.0, 1.0, [](double u0, double u1) { return -std::expm1(-u0) + std::exp(-u1); }};
  return solve_threshold(spec, beta).roots;
}

ExpSystemResidual exp_system_residual(const RootPair& roots, double beta) {
  return {-std::expm1(-roots.u0) + std::exp(-roots.u1) - beta, g(roots.u0) - g(roots.u1)};
}

double chi_square_pivot_log(double u, double scale_n) { return 0.5 * scale_n * g(u / scale_n); }

PivotThreshold chi_square_pivot_threshold(int df_pivot, int scale_n, double beta) {
  check_beta(beta);
  if (df_pivot < 1 || scale_n < 1) throw DomainError("chi_square_pivot_threshold: df and scale must be >= 1");
  auto& cache = threshold_cache();
  const auto key = std::make_tuple(df_pivot, scale_n, beta);
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.entries.find(key); it != cache.entries.end()) return it->second;
  }
  const double half_df = 0.5 * df_pivot;
  const PivotSpec spec{0.5 * scale_n, static_cast<double>(scale_n), [half_df](double u0, double u1) {
                         return boost::math::gamma_p(half_df, 0.5 * u0) + boost::math::gamma_q(half_df, 0.5 * u1);
                       }};
  const PivotThreshold result = solve_threshold(spec, beta);
  std::unique_lock lock(cache.mutex);
  cache.entries.emplace(key, result);
  return result;
}

LrInterval lr_interval(const Sample& sample, NullFamily family, double beta) {
  check_beta(beta);
  check_sample(sample, family);
  const int n = static_cast<int>(sample.size());
  switch (family) {
    case NullFamily::ExpRate: {
      const double total = sample.sum();
      if (n == 1) {
        const RootPair r = solve_exp_system(beta);
        return {r.u0 / total, r.u1 / total, beta, std::exp(g(r.u0)), r, PivotKind::ExpSingle};
      }
      // theta * sum X ~ Gamma(n, 1), i.e. 2 theta sum X ~ chi^2_{2n}.
      const PivotThreshold t = chi_square_pivot_threshold(2 * n, 2 * n, beta);
      const RootPair r{0.5 * t.roots.u0, 0.5 * t.roots.u1};
      return {r.u0 / total, r.u1 / total, beta, t.a_beta, r, PivotKind::ExpGamma};
    }
    case NullFamily::NormalMeanUnitVar: {
      // n (Xbar - theta)^2 ~ chi^2_1 and 2 log A_beta is its upper beta quantile.
      const double q = chi_square_quantile(1.0, 1.0 - beta);
      const double z = std::sqrt(q);
      const double half_width = z / std::sqrt(static_cast<double>(n));
      const double centre = sample.mean();
      return {centre - half_width, centre + half_width, beta, std::exp(0.5 * q), {-z, z}, PivotKind::NormalMean};
    }
    case NullFamily::NormalScaleZeroMean: {
      const PivotThreshold t = chi_square_pivot_threshold(n, n, beta);
      const double ss = sample.sum_of_squares();
      return {std::sqrt(ss / t.roots.u1), std::sqrt(ss / t.roots.u0), beta, t.a_beta, t.roots,
              PivotKind::ChiSquareScale};
    }
  }
  throw DomainError("unknown null family");
}

double pooled_sum_of_squares(const Sample& x, const Sample& y) {
  const double total = x.sum() + y.sum();
  const double mean = total / static_cast<double>(x.size() + y.size());
  double s = 0.0;
  for (double v : x.values()) s += (v - mean) * (v - mean);
  for (double v : y.values()) s += (v - mean) * (v - mean);
  return s;
}

namespace {

double checked_pooled_ss(const Sample& x, const Sample& y, double beta) {
  check_beta(beta);
  if (x.size() + y.size() < 3) throw DomainError("two-sample interval requires n + m >= 3");
  const double s = pooled_sum_of_squares(x, y);
  if (!(s > 0)) throw DataError("pooled sample has zero variance");
  return s;
}

}  // namespace

SigmaInterval pooled_sigma_interval(const Sample& x, const Sample& y, double beta) {
  const double s = checked_pooled_ss(x, y, beta);
  const int big_n = static_cast<int>(x.size() + y.size());
  const PivotThreshold t = chi_square_pivot_threshold(big_n - 1, big_n, beta);
  return {std::sqrt(s / t.roots.u1), std::sqrt(s / t.roots.u0)};
}

double chisq_simple_sigma2_upper(const Sample& x, const Sample& y, double beta) {
  const double s = checked_pooled_ss(x, y, beta);
  const int big_n = static_cast<int>(x.size() + y.size());
  return s / chi_square_quantile(big_n - 1, beta);
}

}  // namespace vpv
