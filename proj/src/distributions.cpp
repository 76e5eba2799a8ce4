#include "vpv/distributions.hpp"

#include <limits>
#include <sstream>

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/logistic.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/distributions/weibull.hpp>
#include <boost/random/cauchy_distribution.hpp>
#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>
#include <boost/random/weibull_distribution.hpp>

#include "vpv/errors.hpp"

namespace vpv {
namespace {

namespace bm = boost::math;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

bool positive_support(const DistFamily& dist) {
  return std::holds_alternative<Exponential>(dist) || std::holds_alternative<Gamma>(dist) ||
         std::holds_alternative<LogNormal>(dist) || std::holds_alternative<ChiSquare>(dist) ||
         std::holds_alternative<Weibull>(dist);
}

}  // namespace

void validate(const DistFamily& dist) {
  std::visit(overloaded{
                 [](const Normal& d) { require(std::isfinite(d.mu) && d.sigma > 0, "Normal: sigma must be > 0"); },
                 [](const Exponential& d) { require(d.rate > 0, "Exponential: rate must be > 0"); },
                 [](const Gamma& d) { require(d.shape > 0 && d.scale > 0, "Gamma: shape and scale must be > 0"); },
                 [](const LogNormal& d) { require(std::isfinite(d.mu) && d.sigma > 0, "LogNormal: sigma must be > 0"); },
                 [](const ChiSquare& d) { require(d.df > 0, "ChiSquare: df must be > 0"); },
                 [](const Weibull& d) { require(d.shape > 0 && d.scale > 0, "Weibull: shape and scale must be > 0"); },
                 [](const Cauchy& d) { require(std::isfinite(d.location) && d.scale > 0, "Cauchy: scale must be > 0"); },
                 [](const Logistic& d) { require(std::isfinite(d.location) && d.scale > 0, "Logistic: scale must be > 0"); },
                 [](const StudentT& d) { require(d.df > 0, "StudentT: df must be > 0"); },
             },
             dist);
}

std::string describe(const DistFamily& dist) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Normal& d) { os << "Normal(" << d.mu << "," << d.sigma << ")"; },
                 [&](const Exponential& d) { os << "Exponential(" << d.rate << ")"; },
                 [&](const Gamma& d) { os << "Gamma(" << d.shape << "," << d.scale << ")"; },
                 [&](const LogNormal& d) { os << "LogNormal(" << d.mu << "," << d.sigma << ")"; },
                 [&](const ChiSquare& d) { os << "ChiSquare(" << d.df << ")"; },
                 [&](const Weibull& d) { os << "Weibull(" << d.shape << "," << d.scale << ")"; },
                 [&](const Cauchy& d) { os << "Cauchy(" << d.location << "," << d.scale << ")"; },
                 [&](const Logistic& d) { os << "Logistic(" << d.location << "," << d.scale << ")"; },
                 [&](const StudentT& d) { os << "StudentT(" << d.df << ")"; },
             },
             dist);
  return os.str();
}

double cdf(const DistFamily& dist, double x) {
  validate(dist);
  if (std::isnan(x)) throw DomainError("cdf: x is NaN");
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (positive_support(dist) && x <= 0) return 0.0;
  return std::visit(overloaded{
                        [&](const Normal& d) { return normal_cdf((x - d.mu) / d.sigma); },
                        [&](const Exponential& d) { return -std::expm1(-d.rate * x); },
                        [&](const Gamma& d) { return bm::cdf(bm::gamma_distribution<>(d.shape, d.scale), x); },
                        [&](const LogNormal& d) { return bm::cdf(bm::lognormal(d.mu, d.sigma), x); },
                        [&](const ChiSquare& d) { return chi_square_cdf(d.df, x); },
                        [&](const Weibull& d) { return bm::cdf(bm::weibull(d.shape, d.scale), x); },
                        [&](const Cauchy& d) { return bm::cdf(bm::cauchy(d.location, d.scale), x); },
                        [&](const Logistic& d) { return bm::cdf(bm::logistic(d.location, d.scale), x); },
                        [&](const StudentT& d) { return bm::cdf(bm::students_t(d.df), x); },
                    },
                    dist);
}

double pdf(const DistFamily& dist, double x) {
  validate(dist);
  if (!std::isfinite(x)) return 0.0;
  if (positive_support(dist) && x < 0) return 0.0;
  return std::visit(overloaded{
                        [&](const Normal& d) { return normal_pdf((x - d.mu) / d.sigma) / d.sigma; },
                        [&](const Exponential& d) { return d.rate * std::exp(-d.rate * x); },
                        [&](const Gamma& d) { return bm::pdf(bm::gamma_distribution<>(d.shape, d.scale), x); },
                        [&](const LogNormal& d) { return bm::pdf(bm::lognormal(d.mu, d.sigma), x); },
                        [&](const ChiSquare& d) { return bm::pdf(bm::chi_squared(d.df), x); },
                        [&](const Weibull& d) { return bm::pdf(bm::weibull(d.shape, d.scale), x); },
                        [&](const Cauchy& d) { return bm::pdf(bm::cauchy(d.location, d.scale), x); },
                        [&](const Logistic& d) { return bm::pdf(bm::logistic(d.location, d.scale), x); },
                        [&](const StudentT& d) { return bm::pdf(bm::students_t(d.df), x); },
                    },
                    dist);
}

double quantile(const DistFamily& dist, double p) {
  validate(dist);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  return std::visit(overloaded{
                        [&](const Normal& d) { return d.mu + d.sigma * normal_quantile(p); },
                        [&](const Exponential& d) { return -std::log1p(-p) / d.rate; },
                        [&](const Gamma& d) { return bm::quantile(bm::gamma_distribution<>(d.shape, d.scale), p); },
                        [&](const LogNormal& d) { return bm::quantile(bm::lognormal(d.mu, d.sigma), p); },
                        [&](const ChiSquare& d) { return chi_square_quantile(d.df, p); },
                        [&](const Weibull& d) { return bm::quantile(bm::weibull(d.shape, d.scale), p); },
                        [&](const Cauchy& d) { return bm::quantile(bm::cauchy(d.location, d.scale), p); },
                        [&](const Logistic& d) { return bm::quantile(bm::logistic(d.location, d.scale), p); },
                        [&](const StudentT& d) { return bm::quantile(bm::students_t(d.df), p); },
                    },
                    dist);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  return bm::quantile(bm::normal(), p);
}

double chi_square_cdf(double df, double x) {
  if (!(df > 0)) throw ParameterError("ChiSquare: df must be > 0");
  if (x <= 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return bm::gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double df, double p) {
  if (!(df > 0)) throw ParameterError("ChiSquare: df must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_square_quantile: p must lie in (0, 1)");
  return 2.0 * bm::gamma_p_inv(0.5 * df, p);
}

double standard_normal(RandomStream& stream) {
  return boost::random::normal_distribution<double>(0.0, 1.0)(stream);
}

double draw(RandomStream& stream, const DistFamily& dist) {
  return std::visit(
      overloaded{
          [&](const Normal& d) { return boost::random::normal_distribution<double>(d.mu, d.sigma)(stream); },
          [&](const Exponential& d) { return boost::random::exponential_distribution<double>(d.rate)(stream); },
          [&](const Gamma& d) { return boost::random::gamma_distribution<double>(d.shape, d.scale)(stream); },
          [&](const LogNormal& d) { return boost::random::lognormal_distribution<double>(d.mu, d.sigma)(stream); },
          [&](const ChiSquare& d) { return boost::random::chi_squared_distribution<double>(d.df)(stream); },
          [&](const Weibull& d) { return boost::random::weibull_distribution<double>(d.shape, d.scale)(stream); },
          [&](const Cauchy& d) { return boost::random::cauchy_distribution<double>(d.location, d.scale)(stream); },
          [&](const Logistic& d) {
            const double u = stream.uniform();
            return d.location + d.scale * std::log(u / (1.0 - u));
          },
          [&](const StudentT& d) { return boost::random::student_t_distribution<double>(d.df)(stream); },
      },
      dist);
}

std::vector<double> sample(RandomStream& stream, const DistFamily& dist, std::size_t n) {
  validate(dist);
  if (n == 0) throw DomainError("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& x : out) x = draw(stream, dist);
  return out;
}

}  // namespace vpv
