#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vpv/distributions.hpp"
#include "vpv/ks_engine.hpp"
#include "vpv/montecarlo.hpp"

namespace vpv {

enum class EpvKind { EpvS, EpvC, Plain, Partial };

struct EpvEstimate {
  double value;
  double std_err;
  std::size_t reps;
  EpvKind kind;
};

// Data-generating mechanism for a Monte Carlo study: draws one observation.
struct AlternativeDesign {
  std::string tag;
  std::function<double(RandomStream&)> draw_one;

  std::vector<double> draw(RandomStream& stream, std::size_t n) const;
};

// Source distributions of the normality power study:
//   A: Gamma(1, 2) - 0.03        B: LogN(5, 1) - e^3
//   C: chi^2_3 - 0.45            D: Weibull(1, 5) - 0.3
//   F: LogN(5, 1) / N(2, 1) - e^3 / 2   (no finite mean)
// Gamma(1, 2) is read as (shape, rate), Weibull(1, 5) as (shape, scale); under
// this reading (A) and (D) are the same law up to scale.
AlternativeDesign table1_design(char tag);
AlternativeDesign shifted_design(std::string tag, DistFamily base, double shift);
// Data drawn from the null family at theta0.
AlternativeDesign null_design(NullFamily family, double theta0);

using StatSampler = std::function<double(RandomStream&)>;

struct PlainEpv {
  EpvEstimate paired;                     // fraction of pairs with T0 >= TA
  std::optional<EpvEstimate> integrated;  // mean of 1 - F0(TA), when F0 is supplied
};

PlainEpv epv_plain(const StatSampler& t0, const StatSampler& t1, std::size_t reps, std::uint64_t seed, int workers,
                   const std::function<double(double)>& null_cdf = {});

// Columns of simulate_gof output.
enum GofColumn : std::size_t { kPsRaw = 0, kPcRaw = 1, kPShapiro = 2, kPTTest = 3, kGofColumns = 4 };

// One replication = one sample of size n from the design; records raw p_S,
// raw p_C and (when with_baselines) the Shapiro-Wilk and one-sample t p-values.
ReplicationTable simulate_gof(NullFamily family, const AlternativeDesign& design, int n, double beta,
                              std::size_t reps, std::uint64_t seed, int workers, bool with_baselines = false);

// EPV_S and EPV_C; EPV_C carries the + beta exactly as the raw p_C does.
std::pair<EpvEstimate, EpvEstimate> epv_gof(NullFamily family, const AlternativeDesign& design, int n, double beta,
                                            std::size_t reps, std::uint64_t seed, int workers);

// pEPV(lo, hi) = 1 - E[max(0, hi - max(p, lo))].
EpvEstimate pepv(std::span<const double> p_values, double alpha_lo, double alpha_hi);
EpvEstimate pepv(const StatSampler& p_value_sampler, double alpha_lo, double alpha_hi, std::size_t reps,
                 std::uint64_t seed, int workers);

enum class YoudenTag { Analytic, Empirical, Degenerate };

struct YoudenResult {
  double c_star;
  double objective_at_c;  // Pr(T0 < c) + Pr(TA >= c)
  YoudenTag tag;
};

struct YoudenGrid {
  double lo;
  double hi;
  int points = 400;
  bool log_scale = true;
};

// Maximizes F0(c) + 1 - F1(c) over the grid, then refines by golden section.
YoudenResult youden_threshold(const std::function<double(double)>& cdf0, const std::function<double(double)>& cdf1,
                              const YoudenGrid& grid);
// Same objective from draws of T0 and TA.
YoudenResult youden_threshold(std::span<const double> t0, std::span<const double> t1, const YoudenGrid& grid);

// X_1..X_n iid N(mu, sigma^2); H0: mu = 0 against H1: mu = delta.
struct NormalLrModel {
  double delta;
  double sigma = 1.0;
  int n = 1;
};

double normal_log_lr(const NormalLrModel& model, double sum_x);
// CDF of LR_n under H0 (alternative = false) or H1.
double normal_lr_cdf(const NormalLrModel& model, double c, bool alternative);

// Discrete prior over the alternative mean, for the Bayes factor B_n.
struct DiscretePrior {
  std::vector<double> means;
  std::vector<double> weights;
};

struct LrIdentityReport {
  int bins_used;
  double max_relative_deviation;  // max over bins |(f1 / f0) / u - 1|
  McSummary mean_under_h0;        // E[statistic | H0], equal to 1 in theory
};

// Checks f_1(u) = u f_0(u) for LR_n (prior empty) or B_n (prior given) with
// equal-mass bins over the central `central_mass` of the pooled draws. The
// bin representative u is the H0-conditional mean of the statistic in the bin.
LrIdentityReport lr_identity_check(const NormalLrModel& model, const std::optional<DiscretePrior>& prior,
                                   std::size_t reps, std::uint64_t seed, int workers, int bins = 40,
                                   double central_mass = 0.98);

struct NormalLrReport {
  double type1_at_c1;
  double power_at_c1;
  double c_prime;
  double power_at_c_prime;
};

// Closed forms for the normal LR test with delta = tau sigma / sqrt(n).
NormalLrReport normal_lr_analysis(double tau, double target_alpha = 0.01);

struct SweepRow {
  double alpha;
  double power;
  double power_minus_alpha;
  double std_err;
};

using PValueFn = std::function<double(const Sample&)>;

// One Monte Carlo pass; per-replication p-values are thresholded at every alpha.
std::vector<SweepRow> power_minus_alpha_sweep(const PValueFn& test, const AlternativeDesign& design, int n,
                                              std::span<const double> alphas, std::size_t reps, std::uint64_t seed,
                                              int workers);

struct Prop6Report {
  double alpha;
  double critical_value;  // C_alpha, the level-alpha critical value of LR_n
  EpvEstimate pepv;       // pEPV(0, alpha)
  bool precondition;      // pEPV(0, alpha) <= 1 - alpha^2 / 2
  McSummary power;        // Pr(p < alpha | H1)
  double bound;           // 0.5 alpha + 0.5 alpha C_alpha
  double margin;          // power - bound
  bool holds;             // power >= bound - 3 s.e. (only meaningful with the precondition)
};

Prop6Report prop6_bound_check(const NormalLrModel& model, double alpha, std::size_t reps, std::uint64_t seed,
                              int workers);

// alpha at which the LR critical value equals 1: 1 - Phi(tau / 2).
double alpha_with_unit_critical_value(const NormalLrModel& model);

}  // namespace vpv
