#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vpv/experiments.hpp"

using namespace vpv;

namespace {

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, FileAndSettings) {
  const auto path = temp_path("vpv_config.txt");
  {
    std::ofstream f(path);
    f << "# comment line\n"
      << "experiment = two-sample\n"
      << "n = 12   # trailing comment\n"
      << "m=20\n"
      << "alpha = 0.01\n"
      << "beta = 0.002\n"
      << "interval = chisq\n"
      << "\n"
      << "seed = 7\n";
  }
  ExperimentConfig c;
  apply_config_file(c, path);
  EXPECT_EQ(c.experiment, "two-sample");
  EXPECT_EQ(c.n, 12);
  EXPECT_EQ(c.m, 20);
  EXPECT_DOUBLE_EQ(c.alpha, 0.01);
  ASSERT_TRUE(c.beta.has_value());
  EXPECT_DOUBLE_EQ(*c.beta, 0.002);
  EXPECT_EQ(c.interval, SigmaIntervalKind::ChiSquareUpper);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_NO_THROW(validate(c));
  std::remove(path.c_str());
}

TEST(Config, ErrorsNameTheField) {
  ExperimentConfig c;
  try {
    apply_setting(c, "alpha", "0.0x");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_EQ(e.field(), "alpha");
  }
  EXPECT_THROW(apply_setting(c, "colour", "red"), UsageError);
  EXPECT_THROW(apply_setting(c, "interval", "wald"), UsageError);

  auto field_of = [](ExperimentConfig bad) {
    try {
      validate(bad);
    } catch (const UsageError& e) {
      return e.field();
    }
    return std::string("none");
  };
  ExperimentConfig base;
  EXPECT_EQ(field_of(base), "none");
  auto bad = base;
  bad.alpha = 1.5;
  EXPECT_EQ(field_of(bad), "alpha");
  bad = base;
  bad.beta = 0.0;
  EXPECT_EQ(field_of(bad), "beta");
  bad = base;
  bad.reps = 999;
  EXPECT_EQ(field_of(bad), "reps");
  bad = base;
  bad.workers = 0;
  EXPECT_EQ(field_of(bad), "workers");
  bad = base;
  bad.family = "poisson";
  EXPECT_EQ(field_of(bad), "family");
  bad = base;
  bad.experiment = "bootstrap";
  EXPECT_EQ(field_of(bad), "experiment");
}

TEST(Designs, ByName) {
  for (const char* name : {"A", "B", "C", "D", "F", "cauchy", "null", "sw-lognormal", "normal-shift", "logistic-shift"})
    EXPECT_NO_THROW(design_by_name(name, 10, NullFamily::NormalScaleZeroMean)) << name;
  EXPECT_THROW(design_by_name("G", 10, NullFamily::NormalScaleZeroMean), UsageError);
}

TEST(Csv, FormatIsFixed) {
  const std::vector<ResultRow> rows{{"table1", "A:n=7", "p_S", 0.78784, 0.00258551, 25000, kDefaultSeed},
                                    {"youden", "tau=3.3;alpha=0.01", "c_prime", 9.317999729220503, 0.0, 0, 1}};
  EXPECT_EQ(format_csv(rows),
            "experiment,cell,test,estimate,std_err,reps,seed\n"
            "table1,A:n=7,p_S,0.78784,0.00258551,25000,20190501\n"
            "youden,tau=3.3;alpha=0.01,c_prime,9.318,0,0,1\n");
  const auto path = temp_path("vpv_rows.csv");
  write_csv(path, rows);
  EXPECT_EQ(read_file(path), format_csv(rows));
  std::remove(path.c_str());
}

TEST(Run, DeterministicAcrossWorkers) {
  ExperimentConfig c;
  c.design = "C";
  c.n = 8;
  c.reps = 2000;
  c.workers = 1;
  const auto one = format_csv(run(c));
  c.workers = 4;
  EXPECT_EQ(format_csv(run(c)), one);
  c.seed = kDefaultSeed + 1;
  EXPECT_NE(format_csv(run(c)), one);
}

TEST(Run, RowShapes) {
  ExperimentConfig g;
  g.reps = 1000;
  const auto gof = run(g);
  ASSERT_EQ(gof.size(), 3u);
  EXPECT_EQ(gof[2].test, "SWt");
  EXPECT_EQ(gof[0].cell, "A:n=10");

  ExperimentConfig t;
  t.experiment = "two-sample";
  t.design = "null";
  t.reps = 2000;
  const auto two = run(t);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two[0].test, "p_C");
  EXPECT_EQ(two[0].cell, "null:n=10;m=15");
  EXPECT_LE(two[0].estimate, 0.05 + 3 * two[0].std_err);

  ExperimentConfig e;
  e.experiment = "epv";
  e.reps = 1000;
  const auto epv = run(e);
  ASSERT_EQ(epv.size(), 2u);
  EXPECT_EQ(epv[0].test, "EPV_S");
  EXPECT_EQ(epv[1].test, "EPV_C");

  ExperimentConfig y;
  y.experiment = "youden";
  y.alpha = 0.01;
  const auto yr = run(y);
  ASSERT_EQ(yr.size(), 6u);
  EXPECT_EQ(yr.back().test, "youden_c_star");
  EXPECT_NEAR(yr.back().estimate, 1.0, 1e-6);
}

TEST(Reproduce, FigA1AndYoudenAreDeterministicClosedForms) {
  const auto fig = reproduce("figA1", {});
  ASSERT_EQ(fig.size(), 2u * 99 + 2);
  EXPECT_EQ(fig[fig.size() - 2].cell, "ln2-cutoff");
  EXPECT_NEAR(fig[fig.size() - 2].estimate, 0.75, 5e-3);
  EXPECT_LE(fig.back().estimate, 1e-10);
  EXPECT_THROW(reproduce("table9", {}), UsageError);
  EXPECT_EQ(reproduce_targets().size(), 6u);
}
