#pragma once

#include "vpv/ks_engine.hpp"

namespace vpv {

// Roots u0 < m < u1 of h(u) = A_beta, where m is the minimizer of the pivot
// function h (h(m) = 1).
struct RootPair {
  double u0;
  double u1;
};

enum class PivotKind {
  ExpSingle,       // u^{-1} e^{u-1}, u = theta X_1 ~ Exp(1)
  ExpGamma,        // (t/n)^{-n} e^{t-n}, t = theta sum X ~ Gamma(n, 1)
  NormalMean,      // exp(z^2 / 2), z = sqrt(n)(Xbar - theta); roots are -/+ |z|
  ChiSquareScale,  // (u/n)^{-n/2} e^{u/2-n/2}, u = sum X^2 / theta^2 ~ chi^2_n
  PooledSigma,     // (u/N)^{-N/2} e^{u/2-N/2}, u = S / sigma^2 ~ chi^2_{N-1}
};

// Maximum null-likelihood-ratio confidence interval [lo, hi] for the nuisance parameter.
struct LrInterval {
  double lo;
  double hi;
  double beta;
  double a_beta;
  RootPair roots;
  PivotKind pivot;
};

struct PivotThreshold {
  double a_beta;
  RootPair roots;
};

// Solves 1 - e^{-u0} + e^{-u1} = beta together with h(u0) = h(u1) for
// h(u) = u^{-1} e^{u-1}; 0 < u0 < 1 < u1.
RootPair solve_exp_system(double beta);

// The two residuals of the system above, for diagnostics.
struct ExpSystemResidual {
  double coverage;  // 1 - e^{-u0} + e^{-u1} - beta
  double balance;   // log h(u0) - log h(u1)
};
ExpSystemResidual exp_system_residual(const RootPair& roots, double beta);

// Threshold A_beta with Pr{h(eta) > A_beta} = beta for eta ~ chi^2_df and
// h(u) = (u/scale_n)^{-scale_n/2} exp(u/2 - scale_n/2). Results are memoized.
PivotThreshold chi_square_pivot_threshold(int df_pivot, int scale_n, double beta);

// log h for the chi-square pivot family.
double chi_square_pivot_log(double u, double scale_n);

LrInterval lr_interval(const Sample& sample, NullFamily family, double beta);

struct SigmaInterval {
  double lo;
  double hi;
};

// Pooled residual sum of squares of (x, y) around the pooled mean.
double pooled_sum_of_squares(const Sample& x, const Sample& y);

// LR interval for the common sigma of the normal two-sample model.
SigmaInterval pooled_sigma_interval(const Sample& x, const Sample& y, double beta);

// One-sided interval {sigma^2 : 0 <= sigma^2 <= S / gamma_beta}; returns the
// upper limit for sigma^2.
double chisq_simple_sigma2_upper(const Sample& x, const Sample& y, double beta);

}  // namespace vpv
