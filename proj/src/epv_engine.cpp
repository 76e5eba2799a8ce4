#include "vpv/epv_engine.hpp"

#include <algorithm>
#include <cmath>

#include "vpv/baseline_tests.hpp"
#include "vpv/errors.hpp"
#include "vpv/optimize.hpp"
#include "vpv/vpv_tests.hpp"

namespace vpv {
namespace {

EpvEstimate to_estimate(const McSummary& s, EpvKind kind) { return {s.mean, s.std_err, s.reps, kind}; }

void check_reps(std::size_t reps, const char* where) {
  if (reps == 0) throw DomainError(std::string(where) + ": reps must be positive");
}

}  // namespace

std::vector<double> AlternativeDesign::draw(RandomStream& stream, std::size_t n) const {
  std::vector<double> out(n);
  for (auto& x : out) x = draw_one(stream);
  return out;
}

AlternativeDesign table1_design(char tag) {
  switch (tag) {
    case 'A':
      return shifted_design("A", Gamma{1.0, 0.5}, -0.03);
    case 'B':
      return shifted_design("B", LogNormal{5.0, 1.0}, -std::exp(3.0));
    case 'C':
      return shifted_design("C", ChiSquare{3.0}, -0.45);
    case 'D':
      return shifted_design("D", Weibull{1.0, 5.0}, -0.3);
    case 'F': {
      const DistFamily num = LogNormal{5.0, 1.0};
      const DistFamily den = Normal{2.0, 1.0};
      const double shift = std::exp(3.0) / 2;
      return {"F", [num, den, shift](RandomStream& s) {
                const double xi = draw(s, num);
                const double eta = draw(s, den);
                return xi / eta - shift;
              }};
    }
    default:
      throw ParameterError(std::string("table1_design: unknown design tag '") + tag + "'");
  }
}

AlternativeDesign shifted_design(std::string tag, DistFamily base, double shift) {
  validate(base);
  return {std::move(tag), [base = std::move(base), shift](RandomStream& s) { return draw(s, base) + shift; }};
}

AlternativeDesign null_design(NullFamily family, double theta0) {
  if (!in_parameter_space(family, theta0)) throw ParameterError("null_design: theta0 outside the parameter space");
  switch (family) {
    case NullFamily::ExpRate:
      return shifted_design("null-exp", Exponential{theta0}, 0.0);
    case NullFamily::NormalMeanUnitVar:
      return shifted_design("null-normal-mean", Normal{theta0, 1.0}, 0.0);
    case NullFamily::NormalScaleZeroMean:
      return shifted_design("null-normal-scale", Normal{0.0, theta0}, 0.0);
  }
  throw ParameterError("null_design: unknown family");
}

PlainEpv epv_plain(const StatSampler& t0, const StatSampler& t1, std::size_t reps, std::uint64_t seed, int workers,
                   const std::function<double(double)>& null_cdf) {
  check_reps(reps, "epv_plain");
  const bool integrated = static_cast<bool>(null_cdf);
  const auto table = run_replications(seed, reps, 2, workers, [&](RandomStream& s, std::span<double> out) {
    const double a = t0(s);
    const double b = t1(s);
    out[0] = a >= b ? 1.0 : 0.0;
    out[1] = integrated ? 1.0 - null_cdf(b) : 0.0;
  });
  PlainEpv result{to_estimate(summarize(table.column(0)), EpvKind::Plain), std::nullopt};
  if (integrated) result.integrated = to_estimate(summarize(table.column(1)), EpvKind::Plain);
  return result;
}

ReplicationTable simulate_gof(NullFamily family, const AlternativeDesign& design, int n, double beta,
                              std::size_t reps, std::uint64_t seed, int workers, bool with_baselines) {
  check_reps(reps, "simulate_gof");
  if (n < 1) throw DomainError("simulate_gof: n must be positive");
  if (with_baselines && n < 3) throw DomainError("simulate_gof: baseline tests need n >= 3");
  return run_replications(seed, reps, kGofColumns, workers, [&](RandomStream& s, std::span<double> out) {
    const Sample x(design.draw(s, static_cast<std::size_t>(n)));
    const VpvResult r = gof_vpv(x, family, beta);
    out[kPsRaw] = r.p_s_raw;
    out[kPcRaw] = r.p_c_raw;
    if (with_baselines) {
      out[kPShapiro] = shapiro_wilk(x).p_value;
      out[kPTTest] = t_test(x, std::nullopt, 0.0, TVariant::OneSample, Alternative::TwoSided).p_value;
    } else {
      out[kPShapiro] = out[kPTTest] = std::numeric_limits<double>::quiet_NaN();
    }
  });
}

std::pair<EpvEstimate, EpvEstimate> epv_gof(NullFamily family, const AlternativeDesign& design, int n, double beta,
                                            std::size_t reps, std::uint64_t seed, int workers) {
  const auto table = simulate_gof(family, design, n, beta, reps, seed, workers, false);
  return {to_estimate(summarize(table.column(kPsRaw)), EpvKind::EpvS),
          to_estimate(summarize(table.column(kPcRaw)), EpvKind::EpvC)};
}

EpvEstimate pepv(std::span<const double> p_values, double alpha_lo, double alpha_hi) {
  if (!(alpha_lo >= 0.0 && alpha_lo < alpha_hi && alpha_hi <= 1.0))
    throw DomainError("pepv: need 0 <= alpha_lo < alpha_hi <= 1");
  if (p_values.empty()) throw DomainError("pepv: no p-values");
  std::vector<double> terms(p_values.size());
  for (std::size_t i = 0; i < p_values.size(); ++i)
    terms[i] = 1.0 - std::max(0.0, alpha_hi - std::max(p_values[i], alpha_lo));
  return to_estimate(summarize(terms), EpvKind::Partial);
}

EpvEstimate pepv(const StatSampler& p_value_sampler, double alpha_lo, double alpha_hi, std::size_t reps,
                 std::uint64_t seed, int workers) {
  if (!(alpha_lo >= 0.0 && alpha_lo < alpha_hi && alpha_hi <= 1.0))
    throw DomainError("pepv: need 0 <= alpha_lo < alpha_hi <= 1");
  check_reps(reps, "pepv");
  const auto table = run_replications(seed, reps, 1, workers,
                                      [&](RandomStream& s, std::span<double> out) { out[0] = p_value_sampler(s); });
  const auto p = table.column(0);
  return pepv(p, alpha_lo, alpha_hi);
}

namespace {

std::vector<double> make_grid(const YoudenGrid& grid) {
  if (grid.points < 3 || !(grid.lo < grid.hi)) throw DomainError("youden_threshold: need lo < hi and >= 3 points");
  if (grid.log_scale && !(grid.lo > 0)) throw DomainError("youden_threshold: log grid needs lo > 0");
  std::vector<double> c(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    const double t = static_cast<double>(i) / (grid.points - 1);
    c[i] = grid.log_scale ? std::exp(std::log(grid.lo) + t * (std::log(grid.hi) - std::log(grid.lo)))
                          : grid.lo + t * (grid.hi - grid.lo);
  }
  return c;
}

YoudenResult search(const std::function<double(double)>& objective, const YoudenGrid& grid, double flat_tol,
                    YoudenTag tag) {
  const auto c = make_grid(grid);
  std::size_t best = 0;
  double best_value = -1.0;
  double worst_value = 3.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = objective(c[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
    worst_value = std::min(worst_value, v);
  }
  // The objective is 1 + (F0 - F1); no discrimination means it never rises above 1.
  if (best_value - 1.0 <= flat_tol || best_value - worst_value <= flat_tol)
    return {c[best], best_value, YoudenTag::Degenerate};

  const double a = c[best == 0 ? 0 : best - 1];
  const double b = c[std::min(best + 1, c.size() - 1)];
  auto neg = [&](double x) { return -objective(grid.log_scale ? std::exp(x) : x); };
  const auto refined = grid.log_scale ? golden_section_minimize(neg, std::log(a), std::log(b), 1e-10)
                                      : golden_section_minimize(neg, a, b, 1e-10 * (1 + std::abs(b)));
  if (-refined.value > best_value) {
    const double x = grid.log_scale ? std::exp(refined.argmin) : refined.argmin;
    return {x, -refined.value, tag};
  }
  return {c[best], best_value, tag};
}

}  // namespace

YoudenResult youden_threshold(const std::function<double(double)>& cdf0, const std::function<double(double)>& cdf1,
                              const YoudenGrid& grid) {
  return search([&](double c) { return cdf0(c) + 1.0 - cdf1(c); }, grid, 1e-12, YoudenTag::Analytic);
}

YoudenResult youden_threshold(std::span<const double> t0, std::span<const double> t1, const YoudenGrid& grid) {
  if (t0.empty() || t1.empty()) throw DomainError("youden_threshold: empty sample");
  std::vector<double> s0(t0.begin(), t0.end());
  std::vector<double> s1(t1.begin(), t1.end());
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  const double n0 = static_cast<double>(s0.size());
  const double n1 = static_cast<double>(s1.size());
  auto objective = [&](double c) {
    const double below0 = static_cast<double>(std::lower_bound(s0.begin(), s0.end(), c) - s0.begin()) / n0;
    const double below1 = static_cast<double>(std::lower_bound(s1.begin(), s1.end(), c) - s1.begin()) / n1;
    return below0 + 1.0 - below1;
  };
  // Two-sample KS 95% critical value: a smaller excess is indistinguishable from noise.
  const double flat_tol = 1.358 * std::sqrt(1.0 / n0 + 1.0 / n1);
  return search(objective, grid, flat_tol, YoudenTag::Empirical);
}

namespace {

void check_model(const NormalLrModel& m) {
  if (!(m.sigma > 0) || m.n < 1 || !std::isfinite(m.delta) || m.delta == 0.0)
    throw ParameterError("NormalLrModel: need sigma > 0, n >= 1 and a finite nonzero delta");
}

double tau_of(const NormalLrModel& m) { return std::abs(m.delta) * std::sqrt(static_cast<double>(m.n)) / m.sigma; }

}  // namespace

double normal_log_lr(const NormalLrModel& m, double sum_x) {
  const double s2 = m.sigma * m.sigma;
  return m.delta * sum_x / s2 - m.delta * m.delta * m.n / (2 * s2);
}

double normal_lr_cdf(const NormalLrModel& m, double c, bool alternative) {
  check_model(m);
  if (c <= 0) return 0.0;
  const double tau = tau_of(m);
  const double half = 0.5 * tau * tau;
  return normal_cdf((std::log(c) + (alternative ? -half : half)) / tau);
}

LrIdentityReport lr_identity_check(const NormalLrModel& model, const std::optional<DiscretePrior>& prior,
                                   std::size_t reps, std::uint64_t seed, int workers, int bins,
                                   double central_mass) {
  check_model(model);
  check_reps(reps, "lr_identity_check");
  if (bins < 2 || !(central_mass > 0 && central_mass <= 1)) throw DomainError("lr_identity_check: bad binning");
  std::vector<double> cumulative;
  if (prior) {
    if (prior->means.empty() || prior->means.size() != prior->weights.size())
      throw ParameterError("lr_identity_check: prior means and weights must match");
    double total = 0.0;
    for (double w : prior->weights) {
      if (!(w > 0)) throw ParameterError("lr_identity_check: prior weights must be positive");
      total += w;
    }
    for (double w : prior->weights) cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + w / total);
  }

  auto statistic = [&](double sum_x) {
    if (!prior) return std::exp(normal_log_lr(model, sum_x));
    double b = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < prior->means.size(); ++k) {
      const NormalLrModel mk{prior->means[k], model.sigma, model.n};
      b += (cumulative[k] - prev) * std::exp(normal_log_lr(mk, sum_x));
      prev = cumulative[k];
    }
    return b;
  };
  auto sum_draw = [&](RandomStream& s, double mu) {
    double sum = 0.0;
    for (int i = 0; i < model.n; ++i) sum += mu + model.sigma * standard_normal(s);
    return sum;
  };

  const auto table = run_replications(seed, reps, 2, workers, [&](RandomStream& s, std::span<double> out) {
    out[0] = statistic(sum_draw(s, 0.0));
    double mu = model.delta;
    if (prior) {
      const double u = s.uniform();
      const auto k = static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                              cumulative.begin());
      mu = prior->means[std::min(k, prior->means.size() - 1)];
    }
    out[1] = statistic(sum_draw(s, mu));
  });
  const auto h0 = table.column(0);
  const auto h1 = table.column(1);

  std::vector<double> pooled(h0);
  pooled.insert(pooled.end(), h1.begin(), h1.end());
  std::sort(pooled.begin(), pooled.end());
  auto pooled_quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::llround(q * static_cast<double>(pooled.size() - 1)));
    return pooled[idx];
  };

  constexpr std::size_t kMinBinCount = 1000;
  const double lo_mass = 0.5 * (1.0 - central_mass);
  for (int b = bins;; b = std::max(2, b / 2)) {
    std::vector<double> edges(b + 1);
    for (int k = 0; k <= b; ++k) edges[k] = pooled_quantile(lo_mass + central_mass * k / b);
    std::vector<std::size_t> c0(b, 0), c1(b, 0);
    std::vector<double> u_sum(b, 0.0);
    auto bin_of = [&](double v) -> int {
      if (v < edges.front() || v >= edges.back()) return -1;
      return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
    };
    for (double v : h0)
      if (const int k = bin_of(v); k >= 0) {
        ++c0[k];
        u_sum[k] += v;
      }
    for (double v : h1)
      if (const int k = bin_of(v); k >= 0) ++c1[k];

    const bool sparse = std::any_of(c0.begin(), c0.end(), [](std::size_t c) { return c < kMinBinCount; }) ||
                        std::any_of(c1.begin(), c1.end(), [](std::size_t c) { return c < kMinBinCount; });
    if (sparse && b > 2) continue;
    if (sparse) throw NumericError("lr_identity_check: too few draws even with two bins", 0.0);

    double worst = 0.0;
    for (int k = 0; k < b; ++k) {
      const double u = u_sum[k] / static_cast<double>(c0[k]);
      const double ratio = (static_cast<double>(c1[k]) / static_cast<double>(h1.size())) /
                           (static_cast<double>(c0[k]) / static_cast<double>(h0.size()));
      worst = std::max(worst, std::abs(ratio / u - 1.0));
    }
    return {b, worst, summarize(h0)};
  }
}

NormalLrReport normal_lr_analysis(double tau, double target_alpha) {
  if (!(tau > 0)) throw ParameterError("normal_lr_analysis: tau must be positive");
  if (!(target_alpha > 0 && target_alpha < 1)) throw DomainError("normal_lr_analysis: target_alpha must lie in (0, 1)");
  const double z = normal_quantile(1.0 - target_alpha);
  const double log_c = tau * (z - tau / 2);
  // Under H1, ln LR ~ N(tau^2 / 2, tau^2).
  return {normal_cdf(-tau / 2), normal_cdf(tau / 2), std::exp(log_c), normal_cdf(tau - z)};
}

std::vector<SweepRow> power_minus_alpha_sweep(const PValueFn& test, const AlternativeDesign& design, int n,
                                              std::span<const double> alphas, std::size_t reps, std::uint64_t seed,
                                              int workers) {
  check_reps(reps, "power_minus_alpha_sweep");
  for (double a : alphas)
    if (!(a > 0 && a < 1)) throw DomainError("power_minus_alpha_sweep: alphas must lie in (0, 1)");
  const auto table = run_replications(seed, reps, 1, workers, [&](RandomStream& s, std::span<double> out) {
    out[0] = test(Sample(design.draw(s, static_cast<std::size_t>(n))));
  });
  const auto p = table.column(0);
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    const auto power = fraction_at_most(p, a);
    rows.push_back({a, power.mean, power.mean - a, power.std_err});
  }
  return rows;
}

double alpha_with_unit_critical_value(const NormalLrModel& model) {
  check_model(model);
  return normal_cdf(-tau_of(model) / 2);
}

Prop6Report prop6_bound_check(const NormalLrModel& model, double alpha, std::size_t reps, std::uint64_t seed,
                              int workers) {
  check_model(model);
  check_reps(reps, "prop6_bound_check");
  if (!(alpha > 0 && alpha < 1)) throw DomainError("prop6_bound_check: alpha must lie in (0, 1)");
  const double tau = tau_of(model);
  const double critical = std::exp(tau * normal_quantile(1.0 - alpha) - tau * tau / 2);

  const auto table = run_replications(seed, reps, 1, workers, [&](RandomStream& s, std::span<double> out) {
    double sum = 0.0;
    for (int i = 0; i < model.n; ++i) sum += model.delta + model.sigma * standard_normal(s);
    // p-value = Pr(LR > observed | H0), with ln LR ~ N(-tau^2 / 2, tau^2) under H0.
    const double log_lr = normal_log_lr(model, sum);
    out[0] = normal_cdf(-(log_lr + tau * tau / 2) / tau);
  });
  const auto p = table.column(0);

  Prop6Report r{};
  r.alpha = alpha;
  r.critical_value = critical;
  r.pepv = pepv(p, 0.0, alpha);
  r.precondition = r.pepv.value <= 1.0 - alpha * alpha / 2;
  r.power = fraction_at_most(p, alpha);
  r.bound = 0.5 * alpha + 0.5 * alpha * critical;
  r.margin = r.power.mean - r.bound;
  r.holds = r.power.mean >= r.bound - 3 * r.power.std_err;
  return r;
}

}  // namespace vpv
