#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "vpv/random.hpp"

namespace vpv {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
struct Gamma {
  double shape = 1.0;
  double scale = 1.0;
};
struct LogNormal {
  double mu = 0.0;  // mean of log X
  double sigma = 1.0;
};
struct ChiSquare {
  double df = 1.0;
};
struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};
struct Cauchy {
  double location = 0.0;
  double scale = 1.0;
};
struct Logistic {
  double location = 0.0;
  double scale = 1.0;
};
struct StudentT {
  double df = 1.0;
};

using DistFamily =
    std::variant<Normal, Exponential, Gamma, LogNormal, ChiSquare, Weibull, Cauchy, Logistic, StudentT>;

// Throws ParameterError when a parameter is outside its family's domain.
void validate(const DistFamily& dist);

std::string describe(const DistFamily& dist);

double cdf(const DistFamily& dist, double x);
double pdf(const DistFamily& dist, double x);
// Throws DomainError unless 0 < p < 1.
double quantile(const DistFamily& dist, double p);

double draw(RandomStream& stream, const DistFamily& dist);
std::vector<double> sample(RandomStream& stream, const DistFamily& dist, std::size_t n);

// Standard normal kernels used on hot paths.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) * 0.3989422804014327; }
double normal_quantile(double p);
double standard_normal(RandomStream& stream);

double chi_square_cdf(double df, double x);
double chi_square_quantile(double df, double p);

}  // namespace vpv
