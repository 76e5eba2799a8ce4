#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vpv/errors.hpp"
#include "vpv/experiments.hpp"

namespace {

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : text)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream tokens(text);
  std::vector<double> out;
  std::string tok;
  while (tokens >> tok) {
    std::size_t used = 0;
    out.push_back(std::stod(tok, &used));
    if (used != tok.size()) throw vpv::DataError("not a number: '" + tok + "'");
  }
  return out;
}

void emit(const std::vector<vpv::ResultRow>& rows, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << vpv::format_csv(rows);
  } else {
    vpv::write_csv(out, rows);
  }
}

struct Flags {
  std::string config_path;
  std::string family;
  std::string design;
  std::optional<int> n, m, workers;
  std::optional<double> alpha, beta, tau;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::string interval;
  std::string out;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "flat key = value file; flags override it");
  app->add_option("--n", f.n, "sample size (first sample for two-sample)");
  app->add_option("--alpha", f.alpha, "significance level");
  app->add_option("--beta", f.beta, "confidence-set level parameter");
  app->add_option("--reps", f.reps, "Monte Carlo replications");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--workers", f.workers, "worker threads (default $VPV_WORKERS or the core count)");
  app->add_option("--out", f.out, "CSV output path (stdout when omitted)");
}

vpv::ExperimentConfig build_config(const std::string& experiment, const Flags& f) {
  vpv::ExperimentConfig c;
  c.workers = vpv::default_workers();
  if (!f.config_path.empty()) vpv::apply_config_file(c, f.config_path);
  c.experiment = experiment;
  if (!f.family.empty()) c.family = f.family;
  if (!f.design.empty()) c.design = f.design;
  if (f.n) c.n = *f.n;
  if (f.m) c.m = *f.m;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.beta) c.beta = *f.beta;
  if (f.reps) c.reps = *f.reps;
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.tau) c.tau = *f.tau;
  if (!f.interval.empty()) vpv::apply_setting(c, "interval", f.interval);
  if (!f.out.empty()) c.out = f.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Valid p-values for composite nulls, expected p-values and their Monte Carlo studies"};
  app.require_subcommand(1);

  Flags gof, two, epv, youden, repro;
  std::string gof_data, x_path, y_path, target;

  auto* gof_cmd = app.add_subcommand("gof-test", "KS test with a nuisance parameter: p_S and p_C for a data file, "
                                                 "or Monte Carlo power of p_S, p_C (and SWt) for a design");
  add_common(gof_cmd, gof);
  gof_cmd->add_option("--family", gof.family, "exp-rate | normal-mean | normal-scale");
  gof_cmd->add_option("--design", gof.design, "A B C D F cauchy null sw-lognormal normal-shift logistic-shift");
  gof_cmd->add_option("--data", gof_data, "file of observations; skips the simulation");

  auto* two_cmd = app.add_subcommand("two-sample", "normal two-sample p_C (H1: mu1 > mu2) against Student and Welch");
  add_common(two_cmd, two);
  two_cmd->add_option("--m", two.m, "second sample size");
  two_cmd->add_option("--design", two.design, "shift | unequal-var | shifted-exp | null");
  two_cmd->add_option("--interval", two.interval, "confidence set for sigma")->check(CLI::IsMember({"lr", "chisq"}));
  two_cmd->add_option("--x", x_path, "file of first-sample observations; skips the simulation");
  two_cmd->add_option("--y", y_path, "file of second-sample observations");

  auto* epv_cmd = app.add_subcommand("epv", "Monte Carlo EPV_S and EPV_C for a design");
  add_common(epv_cmd, epv);
  epv_cmd->add_option("--family", epv.family, "exp-rate | normal-mean | normal-scale");
  epv_cmd->add_option("--design", epv.design, "design name, as for gof-test");

  auto* youden_cmd = app.add_subcommand("youden", "normal LR test: Youden threshold and the level-alpha threshold");
  add_common(youden_cmd, youden);
  youden_cmd->add_option("--tau", youden.tau, "standardized shift delta sqrt(n) / sigma");

  auto* repro_cmd = app.add_subcommand("reproduce", "run a preconfigured experiment battery");
  repro_cmd->add_option("target", target, "table1 | table2 | figA1 | sec221 | sec321 | youden")
      ->required()
      ->check(CLI::IsMember(vpv::reproduce_targets()));
  repro_cmd->add_option("--reps", repro.reps, "override every cell's replication count");
  repro_cmd->add_option("--seed", repro.seed, "master seed");
  repro_cmd->add_option("--workers", repro.workers, "worker threads (default $VPV_WORKERS or the core count)");
  repro_cmd->add_option("--out", repro.out, "CSV output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gof_cmd && !gof_data.empty()) {
      const auto c = build_config("gof-test", gof);
      const vpv::Sample x(read_numbers(gof_data));
      const auto r = vpv::gof_vpv(x, vpv::parse_null_family(c.family), c.beta.value_or(vpv::kDefaultGofBeta));
      emit({{"gof-test", "data:n=" + std::to_string(x.size()), "p_S", r.p_s, 0.0, 0, c.seed},
            {"gof-test", "data:n=" + std::to_string(x.size()), "p_C", r.p_c, 0.0, 0, c.seed}},
           c.out);
    } else if (*two_cmd && (!x_path.empty() || !y_path.empty())) {
      if (x_path.empty() || y_path.empty()) throw vpv::UsageError("y", "--x and --y must be given together");
      const auto c = build_config("two-sample", two);
      const vpv::Sample x(read_numbers(x_path)), y(read_numbers(y_path));
      const auto r = vpv::two_sample_vpv(x, y, c.beta.value_or(vpv::kDefaultTwoSampleBeta), c.interval);
      const std::string cell = "data:n=" + std::to_string(x.size()) + ";m=" + std::to_string(y.size());
      emit({{"two-sample", cell, "p_S", r.p_s, 0.0, 0, c.seed}, {"two-sample", cell, "p_C", r.p_c, 0.0, 0, c.seed}},
           c.out);
    } else if (*repro_cmd) {
      vpv::ReproduceOptions o;
      o.workers = repro.workers.value_or(vpv::default_workers());
      if (repro.seed) o.seed = *repro.seed;
      o.reps = repro.reps;
      emit(vpv::reproduce(target, o), repro.out);
    } else {
      std::string name;
      const Flags* f = nullptr;
      if (*gof_cmd) name = "gof-test", f = &gof;
      else if (*two_cmd) name = "two-sample", f = &two;
      else if (*epv_cmd) name = "epv", f = &epv;
      else name = "youden", f = &youden;
      auto c = build_config(name, *f);
      if (name == "two-sample" && two.design.empty()) c.design = "shift";
      emit(vpv::run(c), c.out);
    }
  } catch (const vpv::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
