#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpv/epv_engine.hpp"
#include "vpv/vpv_tests.hpp"

namespace vpv {

inline constexpr std::uint64_t kDefaultSeed = 20190501;

class UsageError : public std::invalid_argument {
 public:
  UsageError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string experiment = "gof-test";  // gof-test | two-sample | epv | youden
  std::string family = "normal-scale";
  std::string design = "A";
  int n = 10;
  int m = 15;
  double alpha = 0.05;
  std::optional<double> beta;  // per-experiment default when unset
  std::optional<std::size_t> reps;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  SigmaIntervalKind interval = SigmaIntervalKind::LikelihoodRatio;
  double tau = 3.3;
  std::string out;
};

// Flat `key = value` lines; `#` starts a comment. Keys match the CLI flags.
void apply_config_file(ExperimentConfig& config, const std::string& path);
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
// Throws UsageError naming the offending field.
void validate(const ExperimentConfig& config);

struct ResultRow {
  std::string experiment;
  std::string cell;
  std::string test;
  double estimate;
  double std_err;
  std::size_t reps;
  std::uint64_t seed;
  double wall_seconds = 0.0;  // informational, never written to CSV
};

// Designs by name: A B C D F, cauchy, null, sw-lognormal, normal-shift,
// logistic-shift. The last three scale their effect with n.
AlternativeDesign design_by_name(const std::string& name, int n, NullFamily family);

std::vector<ResultRow> run(const ExperimentConfig& config);

struct ReproduceOptions {
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  std::optional<std::size_t> reps;  // overrides every cell's default
};

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> targets{"table1", "table2", "figA1", "sec221", "sec321", "youden"};
  return targets;
}

std::vector<ResultRow> reproduce(const std::string& target, const ReproduceOptions& options);

// Header `experiment,cell,test,estimate,std_err,reps,seed`, %.6g floats, LF.
std::string format_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace vpv
