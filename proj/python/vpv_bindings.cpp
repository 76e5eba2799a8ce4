#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vpv/baseline_tests.hpp"
#include "vpv/confidence_sets.hpp"
#include "vpv/epv_engine.hpp"
#include "vpv/errors.hpp"
#include "vpv/experiments.hpp"
#include "vpv/ks_engine.hpp"
#include "vpv/vpv_tests.hpp"

namespace py = pybind11;
using namespace vpv;

namespace {

SigmaIntervalKind parse_interval(const std::string& name) {
  if (name == "lr") return SigmaIntervalKind::LikelihoodRatio;
  if (name == "chisq") return SigmaIntervalKind::ChiSquareUpper;
  throw py::value_error("interval must be 'lr' or 'chisq'");
}

Alternative parse_alternative(const std::string& name) {
  if (name == "two-sided") return Alternative::TwoSided;
  if (name == "greater") return Alternative::Greater;
  if (name == "less") return Alternative::Less;
  throw py::value_error("alternative must be 'two-sided', 'greater' or 'less'");
}

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["cell"] = r.cell;
  d["test"] = r.test;
  d["estimate"] = r.estimate;
  d["std_err"] = r.std_err;
  d["reps"] = r.reps;
  d["seed"] = r.seed;
  return d;
}

std::vector<ResultRow> rows_from(const py::list& rows) {
  std::vector<ResultRow> out;
  for (const auto& item : rows) {
    const auto d = item.cast<py::dict>();
    out.push_back({d["experiment"].cast<std::string>(), d["cell"].cast<std::string>(), d["test"].cast<std::string>(),
                   d["estimate"].cast<double>(), d["std_err"].cast<double>(), d["reps"].cast<std::size_t>(),
                   d["seed"].cast<std::uint64_t>()});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Valid p-values for goodness-of-fit and two-sample tests with a nuisance parameter.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.attr("DEFAULT_SEED") = kDefaultSeed;
  m.attr("DEFAULT_GOF_BETA") = kDefaultGofBeta;
  m.attr("DEFAULT_TWO_SAMPLE_BETA") = kDefaultTwoSampleBeta;

  m.def(
      "gof_vpv",
      [](std::vector<double> data, const std::string& family, double beta) {
        const auto r = gof_vpv(Sample(std::move(data)), parse_null_family(family), beta);
        py::dict d;
        d["p_s"] = r.p_s;
        d["p_c"] = r.p_c;
        d["p_s_raw"] = r.p_s_raw;
        d["p_c_raw"] = r.p_c_raw;
        d["d_full"] = r.ks_min_full.d_star;
        d["theta_full"] = r.ks_min_full.theta_star;
        d["d_restricted"] = r.ks_min_restricted.d_star;
        d["theta_restricted"] = r.ks_min_restricted.theta_star;
        d["interval"] = py::make_tuple(r.interval.lo, r.interval.hi);
        return d;
      },
      py::arg("data"), py::arg("family") = "normal-scale", py::arg("beta") = kDefaultGofBeta,
      "p_S and p_C of the KS test; family is exp-rate, normal-mean or normal-scale.");

  m.def(
      "two_sample_vpv",
      [](std::vector<double> x, std::vector<double> y, double beta, const std::string& interval) {
        const auto r = two_sample_vpv(Sample(std::move(x)), Sample(std::move(y)), beta, parse_interval(interval));
        py::dict d;
        d["p_s"] = r.p_s;
        d["p_c"] = r.p_c;
        d["p_c_raw"] = r.p_c_raw;
        d["sigma_interval"] = py::make_tuple(r.sigma_lo, r.sigma_hi);
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("beta") = kDefaultTwoSampleBeta, py::arg("interval") = "lr",
      "p_S and p_C for H0: mu1 = mu2 against mu1 > mu2 with a common unknown sigma.");

  m.def("kolmogorov_null_cdf", &kolmogorov_null_cdf, py::arg("n"), py::arg("d"), "Pr(D_n < d) for the simple-null KS statistic.");

  m.def(
      "solve_exp_system",
      [](double beta) {
        const auto r = solve_exp_system(beta);
        return py::make_tuple(r.u0, r.u1);
      },
      py::arg("beta"), "Roots (u0, u1) of the single-observation exponential interval.");

  m.def(
      "lr_interval",
      [](std::vector<double> data, const std::string& family, double beta) {
        const auto r = lr_interval(Sample(std::move(data)), parse_null_family(family), beta);
        return py::make_tuple(r.lo, r.hi);
      },
      py::arg("data"), py::arg("family"), py::arg("beta"));

  m.def(
      "shapiro_wilk",
      [](std::vector<double> data) {
        const auto r = shapiro_wilk(Sample(std::move(data)));
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("data"), "(W, p-value).");

  m.def(
      "wilcoxon_signed_rank",
      [](std::vector<double> data, double mu0, const std::string& alternative) {
        const auto r = wilcoxon_signed_rank(Sample(std::move(data)), mu0, parse_alternative(alternative));
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("data"), py::arg("mu0") = 0.0, py::arg("alternative") = "two-sided");

  m.def(
      "normal_lr_analysis",
      [](double tau, double target_alpha) {
        const auto r = normal_lr_analysis(tau, target_alpha);
        py::dict d;
        d["type1_at_c1"] = r.type1_at_c1;
        d["power_at_c1"] = r.power_at_c1;
        d["c_prime"] = r.c_prime;
        d["power_at_c_prime"] = r.power_at_c_prime;
        return d;
      },
      py::arg("tau"), py::arg("target_alpha") = 0.01);

  m.def("reproduce_targets", &reproduce_targets);

  m.def(
      "reproduce",
      [](const std::string& target, std::uint64_t seed, int workers, std::optional<std::size_t> reps) {
        ReproduceOptions o;
        o.seed = seed;
        o.workers = workers;
        o.reps = reps;
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = reproduce(target, o);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("target"), py::arg("seed") = kDefaultSeed, py::arg("workers") = 1, py::arg("reps") = py::none(),
      "Runs a preconfigured experiment battery; returns a list of row dicts.");

  m.def(
      "run",
      [](const std::map<std::string, std::string>& settings) {
        ExperimentConfig c;
        for (const auto& [k, v] : settings) apply_setting(c, k, v);
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run(c);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("settings"), "Runs one experiment; settings use the config-file keys, values as strings.");

  m.def(
      "format_csv", [](const py::list& rows) { return format_csv(rows_from(rows)); }, py::arg("rows"),
      "CSV text with the fixed header and 6 significant digits.");
}
