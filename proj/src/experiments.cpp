#include "vpv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vpv/baseline_tests.hpp"
#include "vpv/confidence_sets.hpp"
#include "vpv/errors.hpp"
#include "vpv/optimize.hpp"

namespace vpv {
namespace {

constexpr std::size_t kTableReps = 25000;
constexpr std::size_t kTwoSampleReps = 150000;
constexpr std::size_t kSweepReps = 100000;

// FNV-1a, so cell seeds do not depend on the standard library's std::hash.
std::uint64_t label_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& label) { return mix_seed(master, label_hash(label)); }

std::string cell_label(const std::string& design, int n) { return design + ":n=" + std::to_string(n); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& field, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw UsageError(field, "cannot parse '" + value + "'");
  return out;
}

// Power rows for p_S, p_C and (normal-scale only) SWt from one simulation pass.
std::vector<ResultRow> gof_power_rows(const std::string& experiment, NullFamily family, const std::string& design_name,
                                      int n, double alpha, double beta, std::size_t reps, std::uint64_t master,
                                      int workers) {
  Stopwatch clock;
  const std::string cell = cell_label(design_name, n);
  const bool baselines = family == NullFamily::NormalScaleZeroMean && n >= 3;
  const auto design = design_by_name(design_name, n, family);
  const auto table = simulate_gof(family, design, n, beta, reps, cell_seed(master, cell), workers, baselines);

  auto clamped = [&](std::size_t col) {
    auto v = table.column(col);
    for (auto& x : v) x = std::min(x, 1.0);
    return v;
  };
  const auto ps = fraction_at_most(clamped(kPsRaw), alpha);
  const auto pc = fraction_at_most(clamped(kPcRaw), alpha);
  std::vector<ResultRow> rows{{experiment, cell, "p_S", ps.mean, ps.std_err, reps, master},
                              {experiment, cell, "p_C", pc.mean, pc.std_err, reps, master}};
  if (baselines) {
    std::vector<double> p_min(reps);
    for (std::size_t r = 0; r < reps; ++r) p_min[r] = std::min(table.row(r)[kPShapiro], table.row(r)[kPTTest]);
    const auto swt = fraction_at_most(p_min, alpha / 2);
    rows.push_back({experiment, cell, "SWt", swt.mean, swt.std_err, reps, master});
  }
  for (auto& r : rows) r.wall_seconds = clock.seconds();
  return rows;
}

std::vector<ResultRow> epv_rows(const std::string& experiment, NullFamily family, const std::string& design_name,
                                int n, double beta, std::size_t reps, std::uint64_t master, int workers) {
  Stopwatch clock;
  const std::string cell = cell_label(design_name, n);
  const auto [s, c] =
      epv_gof(family, design_by_name(design_name, n, family), n, beta, reps, cell_seed(master, cell), workers);
  const double t = clock.seconds();
  return {{experiment, cell, "EPV_S", s.value, s.std_err, reps, master, t},
          {experiment, cell, "EPV_C", c.value, c.std_err, reps, master, t}};
}

struct TwoSampleScenario {
  DistFamily x_base;
  double x_shift;
  double x_sign;
};

// X = shift + sign * xi with xi from x_base; Y ~ N(0, 1).
TwoSampleScenario two_sample_scenario(const std::string& name) {
  if (name == "shift") return {Normal{0.7, 1.0}, 0.0, 1.0};
  if (name == "unequal-var") return {Normal{0.0, 2.0}, 0.0, 1.0};
  if (name == "shifted-exp") return {Exponential{1.0}, 1.0, -1.0};
  if (name == "null") return {Normal{0.0, 1.0}, 0.0, 1.0};
  throw UsageError("design", "unknown two-sample scenario '" + name + "' (shift, unequal-var, shifted-exp, null)");
}

std::vector<ResultRow> two_sample_rows(const std::string& experiment, const std::string& scenario_name, int n, int m,
                                       double alpha, double beta, std::size_t reps, std::uint64_t master,
                                       int workers, bool both_intervals, SigmaIntervalKind interval) {
  Stopwatch clock;
  const auto sc = two_sample_scenario(scenario_name);
  const std::string cell = scenario_name + ":n=" + std::to_string(n) + ";m=" + std::to_string(m);
  const auto table = run_replications(cell_seed(master, cell), reps, 4, workers, [&](RandomStream& s, std::span<double> out) {
    std::vector<double> x(n), y(m);
    for (auto& v : x) v = sc.x_shift + sc.x_sign * draw(s, sc.x_base);
    for (auto& v : y) v = standard_normal(s);
    const Sample xs(std::move(x)), ys(std::move(y));
    out[0] = two_sample_vpv(xs, ys, beta, SigmaIntervalKind::LikelihoodRatio).p_c;
    out[1] = two_sample_vpv(xs, ys, beta, SigmaIntervalKind::ChiSquareUpper).p_c;
    out[2] = t_test(xs, ys, 0.0, TVariant::Pooled, Alternative::Greater).p_value;
    out[3] = t_test(xs, ys, 0.0, TVariant::Welch, Alternative::Greater).p_value;
  });
  std::vector<ResultRow> rows;
  auto add = [&](std::size_t col, const char* name) {
    const auto f = fraction_at_most(table.column(col), alpha);
    rows.push_back({experiment, cell, name, f.mean, f.std_err, reps, master});
  };
  if (both_intervals || interval == SigmaIntervalKind::LikelihoodRatio) add(0, "p_C");
  if (both_intervals || interval == SigmaIntervalKind::ChiSquareUpper) add(1, "p_C-chisq");
  add(2, "student");
  add(3, "welch");
  for (auto& r : rows) r.wall_seconds = clock.seconds();
  return rows;
}

std::vector<ResultRow> youden_rows(const std::string& experiment, double tau, double target_alpha,
                                   std::uint64_t master) {
  Stopwatch clock;
  const auto r = normal_lr_analysis(tau, target_alpha);
  const NormalLrModel model{tau, 1.0, 1};
  const auto y = youden_threshold([&](double c) { return normal_lr_cdf(model, c, false); },
                                  [&](double c) { return normal_lr_cdf(model, c, true); }, YoudenGrid{0.1, 10.0});
  const std::string cell = "tau=" + fmt(tau) + ";alpha=" + fmt(target_alpha);
  std::vector<ResultRow> rows{{experiment, cell, "type1_at_c1", r.type1_at_c1, 0.0, 0, master},
                              {experiment, cell, "power_at_c1", r.power_at_c1, 0.0, 0, master},
                              {experiment, cell, "power_minus_type1", r.power_at_c1 - r.type1_at_c1, 0.0, 0, master},
                              {experiment, cell, "c_prime", r.c_prime, 0.0, 0, master},
                              {experiment, cell, "power_at_c_prime", r.power_at_c_prime, 0.0, 0, master},
                              {experiment, cell, "youden_c_star", y.c_star, 0.0, 0, master}};
  for (auto& row : rows) row.wall_seconds = clock.seconds();
  return rows;
}

std::vector<ResultRow> fig_a1_rows(std::uint64_t master) {
  std::vector<ResultRow> rows;
  double worst = 0.0;
  for (int k = 1; k <= 99; ++k) {
    const double beta = k / 100.0;
    const auto roots = solve_exp_system(beta);
    const auto res = exp_system_residual(roots, beta);
    worst = std::max({worst, std::abs(res.coverage), std::abs(res.balance)});
    const std::string cell = "beta=" + fmt(beta);
    rows.push_back({"figA1", cell, "u0", roots.u0, 0.0, 0, master});
    rows.push_back({"figA1", cell, "u1", roots.u1, 0.0, 0, master});
  }
  // ln 2 stays inside (u0, u1) until u0 reaches it; u0 rises with beta.
  const double cutoff = bisect([](double b) { return solve_exp_system(b).u0 - M_LN2; }, 0.01, 0.99);
  rows.push_back({"figA1", "ln2-cutoff", "beta", cutoff, 0.0, 0, master});
  rows.push_back({"figA1", "system", "max_abs_residual", worst, 0.0, 0, master});
  return rows;
}

std::vector<ResultRow> sweep_rows(const std::string& experiment, const std::string& design_name, const char* test_name,
                                  const PValueFn& test, int n, std::size_t reps, std::uint64_t master, int workers) {
  Stopwatch clock;
  static const std::vector<double> alphas{0.3, 0.1, 0.05, 0.01};
  const std::string cell = cell_label(design_name, n);
  const auto sweep = power_minus_alpha_sweep(test, design_by_name(design_name, n, NullFamily::NormalScaleZeroMean), n,
                                             alphas, reps, cell_seed(master, cell + ":" + test_name), workers);
  std::vector<ResultRow> rows;
  for (const auto& s : sweep)
    rows.push_back({experiment, cell + ":alpha=" + fmt(s.alpha), test_name, s.power_minus_alpha, s.std_err, reps,
                    master, clock.seconds()});
  return rows;
}

double shapiro_p(const Sample& x) { return shapiro_wilk(x).p_value; }
double signed_rank_p(const Sample& x) { return wilcoxon_signed_rank(x, 0.0).p_value; }

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "experiment") c.experiment = value;
  else if (key == "family") c.family = value;
  else if (key == "design") c.design = value;
  else if (key == "n") c.n = parse_number<int>(key, value);
  else if (key == "m") c.m = parse_number<int>(key, value);
  else if (key == "alpha") c.alpha = parse_number<double>(key, value);
  else if (key == "beta") c.beta = parse_number<double>(key, value);
  else if (key == "reps") c.reps = parse_number<std::size_t>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "workers") c.workers = parse_number<int>(key, value);
  else if (key == "tau") c.tau = parse_number<double>(key, value);
  else if (key == "out") c.out = value;
  else if (key == "interval") {
    if (value == "lr") c.interval = SigmaIntervalKind::LikelihoodRatio;
    else if (value == "chisq") c.interval = SigmaIntervalKind::ChiSquareUpper;
    else throw UsageError(key, "expected lr or chisq, got '" + value + "'");
  } else {
    throw UsageError(key, "unknown setting");
  }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no), "expected key = value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> experiments{"gof-test", "two-sample", "epv", "youden"};
  if (std::find(experiments.begin(), experiments.end(), c.experiment) == experiments.end())
    throw UsageError("experiment", "unknown experiment '" + c.experiment + "'");
  if (!(c.alpha > 0 && c.alpha < 1)) throw UsageError("alpha", "must lie in (0, 1)");
  if (c.beta && !(*c.beta > 0 && *c.beta < 1)) throw UsageError("beta", "must lie in (0, 1)");
  if (c.reps && *c.reps < 1000) throw UsageError("reps", "must be at least 1000");
  if (c.workers < 1) throw UsageError("workers", "must be at least 1");
  if (c.n < 1) throw UsageError("n", "must be positive");
  if (c.experiment == "two-sample" && c.m < 1) throw UsageError("m", "must be positive");
  if (c.experiment == "youden" && !(c.tau > 0)) throw UsageError("tau", "must be positive");
  if (c.experiment == "gof-test" || c.experiment == "epv") {
    try {
      parse_null_family(c.family);
    } catch (const std::exception& e) {
      throw UsageError("family", e.what());
    }
  }
}

AlternativeDesign design_by_name(const std::string& name, int n, NullFamily family) {
  if (name.size() == 1 && std::string("ABCDF").find(name[0]) != std::string::npos) return table1_design(name[0]);
  if (name == "cauchy") return shifted_design("cauchy", Cauchy{0.0, 0.5}, 0.0);
  if (name == "null") {
    const double theta0 = family == NullFamily::NormalMeanUnitVar ? 0.0 : 1.0;
    return null_design(family, theta0);
  }
  const double effect = 3.3 / std::sqrt(static_cast<double>(n));
  if (name == "sw-lognormal") {
    const DistFamily eta = LogNormal{0.0, 1.3};
    return {name, [effect, eta](RandomStream& s) {
              const double xi = standard_normal(s);
              return xi + effect * draw(s, eta);
            }};
  }
  if (name == "normal-shift") return shifted_design(name, Normal{0.0, 1.0}, effect);
  if (name == "logistic-shift") return shifted_design(name, Logistic{0.0, 1.0}, effect * M_PI / std::sqrt(3.0));
  throw UsageError("design", "unknown design '" + name + "'");
}

std::vector<ResultRow> run(const ExperimentConfig& c) {
  validate(c);
  if (c.experiment == "gof-test") {
    const auto family = parse_null_family(c.family);
    return gof_power_rows(c.experiment, family, c.design, c.n, c.alpha, c.beta.value_or(kDefaultGofBeta),
                          c.reps.value_or(kTableReps), c.seed, c.workers);
  }
  if (c.experiment == "epv") {
    const auto family = parse_null_family(c.family);
    return epv_rows(c.experiment, family, c.design, c.n, c.beta.value_or(kDefaultGofBeta), c.reps.value_or(kTableReps),
                    c.seed, c.workers);
  }
  if (c.experiment == "two-sample")
    return two_sample_rows(c.experiment, c.design, c.n, c.m, c.alpha, c.beta.value_or(kDefaultTwoSampleBeta),
                           c.reps.value_or(kTwoSampleReps), c.seed, c.workers, false, c.interval);
  return youden_rows(c.experiment, c.tau, c.alpha, c.seed);
}

std::vector<ResultRow> reproduce(const std::string& target, const ReproduceOptions& o) {
  std::vector<ResultRow> rows;
  auto append = [&rows](std::vector<ResultRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  const auto family = NullFamily::NormalScaleZeroMean;

  if (target == "table1") {
    const std::size_t reps = o.reps.value_or(kTableReps);
    for (const char* d : {"A", "B", "C", "D"})
      for (int n : {7, 8, 10}) append(gof_power_rows(target, family, d, n, 0.05, kDefaultGofBeta, reps, o.seed, o.workers));
    for (int n : {7, 20}) append(gof_power_rows(target, family, "F", n, 0.05, kDefaultGofBeta, reps, o.seed, o.workers));
    append(gof_power_rows(target, family, "cauchy", 50, 0.05, kDefaultGofBeta, reps, o.seed, o.workers));
  } else if (target == "table2") {
    const std::size_t reps = o.reps.value_or(kTableReps);
    for (const char* d : {"A", "B", "C", "D"})
      for (int n : {7, 8, 10}) append(epv_rows(target, family, d, n, kDefaultGofBeta, reps, o.seed, o.workers));
  } else if (target == "figA1") {
    append(fig_a1_rows(o.seed));
  } else if (target == "sec221") {
    const std::size_t reps = o.reps.value_or(kTwoSampleReps);
    for (const char* s : {"shift", "unequal-var", "shifted-exp"})
      append(two_sample_rows(target, s, 10, 15, 0.05, kDefaultTwoSampleBeta, reps, o.seed, o.workers, true,
                             SigmaIntervalKind::LikelihoodRatio));
  } else if (target == "sec321") {
    const std::size_t reps = o.reps.value_or(kSweepReps);
    append(sweep_rows(target, "sw-lognormal", "shapiro-wilk", shapiro_p, 100, reps, o.seed, o.workers));
    append(sweep_rows(target, "sw-lognormal", "shapiro-wilk", shapiro_p, 150, reps, o.seed, o.workers));
    append(sweep_rows(target, "normal-shift", "signed-rank", signed_rank_p, 100, reps, o.seed, o.workers));
    append(sweep_rows(target, "logistic-shift", "signed-rank", signed_rank_p, 100, reps, o.seed, o.workers));
  } else if (target == "youden") {
    append(youden_rows(target, 3.3, 0.01, o.seed));
  } else {
    throw UsageError("target", "unknown reproduce target '" + target + "'");
  }
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "experiment,cell,test,estimate,std_err,reps,seed\n";
  for (const auto& r : rows) {
    out += r.experiment + ',' + r.cell + ',' + r.test + ',' + fmt(r.estimate) + ',' + fmt(r.std_err) + ',' +
           std::to_string(r.reps) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << format_csv(rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vpv
