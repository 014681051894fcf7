#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "sobolnoise/errors.hpp"
#include "sobolnoise/harness.hpp"

using namespace sobolnoise;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "sobolnoise-tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SOBOLNOISE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_config(bool noisy) {
  ExperimentConfig c;
  c.model = BenchmarkId::linear;
  if (noisy) c.noise = NoiseSpec({0.0, 1.0}, {0.0, 3.0});
  c.budget = 2000;
  c.replicates = 3;
  c.bootstrap_resamples = 20;
  c.master_seed = 5;
  return c;
}

}  // namespace

TEST(RunExperiment, NoNoisePassthrough) {
  auto c = small_config(false);
  c.budget = 20000;
  c.replicates = 1;
  const auto table = run_experiment(c);
  EXPECT_FALSE(table.noisy);
  EXPECT_FALSE(table.corrected);
  ASSERT_EQ(table.rows.size(), 4u);
  for (const auto& row : table.rows) {
    EXPECT_FALSE(row.is_virtual);
    EXPECT_EQ(row.s_corr, row.s_raw);
    EXPECT_EQ(row.t_corr, row.t_raw);
    EXPECT_TRUE(std::isnan(row.t_t_eps));
  }
  EXPECT_EQ(table.evaluations_per_replicate, 3333u * 6u);
}

TEST(RunExperiment, RowCountAndBudgetHonesty) {
  for (bool noisy : {false, true}) {
    const auto c = small_config(noisy);
    const auto table = run_experiment(c);
    const std::size_t d = 4;
    EXPECT_EQ(table.rows.size(), c.replicates * (d + (noisy ? 1 : 0)));
    EXPECT_LE(table.evaluations_per_replicate, c.budget);
    EXPECT_GE(table.evaluations_per_replicate, c.budget - (d + 3));
    EXPECT_TRUE(table.failures.empty());
  }
}

TEST(RunExperiment, NoisyRowsCarryVirtualTotal) {
  const auto table = run_experiment(small_config(true));
  ASSERT_TRUE(table.corrected);
  for (const auto& row : table.rows) {
    EXPECT_FALSE(std::isnan(row.t_t_eps));
    if (row.is_virtual) {
      EXPECT_EQ(row.variable, "t");
      EXPECT_EQ(row.t_raw, row.t_t_eps);
      EXPECT_EQ(row.t_corr, 0.0);
      EXPECT_GE(row.var_t, 0.0);
    } else {
      EXPECT_NEAR(row.s_corr, row.s_raw / (1.0 - row.t_t_eps), 1e-12);
    }
  }
}

TEST(RunExperiment, NoCorrectionKeepsRawButVirtualRows) {
  auto c = small_config(true);
  c.correction = false;
  const auto table = run_experiment(c);
  EXPECT_TRUE(table.noisy);
  EXPECT_FALSE(table.corrected);
  EXPECT_EQ(table.virtual_totals().size(), c.replicates);
  for (const auto& row : table.rows) {
    if (!row.is_virtual) EXPECT_EQ(row.s_corr, row.s_raw);
  }
}

TEST(RunExperiment, GuardFailuresAreRecordedNotFatal) {
  // Noise swamps the signal, so T_t scatters around 1 and a share of the
  // replicates trips the guard while the run carries on.
  auto c = small_config(false);
  c.noise = NoiseSpec({0.0, 0.0}, {-1e4, 1e4});
  c.replicates = 40;
  const auto table = run_experiment(c);
  ASSERT_FALSE(table.failures.empty());
  EXPECT_GT(table.successful_replicates(), 0u);
  for (const auto& f : table.failures) EXPECT_EQ(f.kind, FailureKind::guard);
  EXPECT_EQ(table.rows.size(), table.successful_replicates() * 5u);
  EXPECT_EQ(exit_code_for(table), 0);

  ResultTable all_failed;
  all_failed.replicates_requested = 1;
  all_failed.failures.push_back({0, FailureKind::guard, "guard"});
  EXPECT_EQ(exit_code_for(all_failed), 4);
}

TEST(RunExperiment, DegenerateModelRecorded) {
  auto c = small_config(false);
  c.model = ExternalModelConfig{"awk '{print 1}'", {{"x", 0.0, 1.0}}, false};
  c.budget = 60;
  const auto table = run_experiment(c);
  ASSERT_EQ(table.failures.size(), c.replicates);
  EXPECT_EQ(table.failures[0].kind, FailureKind::degenerate);
  EXPECT_EQ(exit_code_for(table), 4);
}

TEST(ExternalModel, ProtocolRoundTrip) {
  // awk implementation of the linear benchmark.
  auto ext = small_config(false);
  ext.model = ExternalModelConfig{"awk -F, '{printf \"%.17g\\n\", 3*$1 + 2*$2 + $3}'",
                                  make_benchmark(BenchmarkId::linear).controlled(), false};
  const auto external = run_experiment(ext);
  const auto builtin = run_experiment(small_config(false));
  ASSERT_EQ(external.rows.size(), builtin.rows.size());
  for (std::size_t k = 0; k < builtin.rows.size(); ++k) {
    EXPECT_NEAR(external.rows[k].s_raw, builtin.rows[k].s_raw, 1e-12);
    EXPECT_NEAR(external.rows[k].t_raw, builtin.rows[k].t_raw, 1e-12);
  }
}

TEST(ExternalModel, FailuresAndParsing) {
  auto c = small_config(false);
  c.model = ExternalModelConfig{"exit 3", {{"x", 0.0, 1.0}}, false};
  c.budget = 60;
  auto table = run_experiment(c);
  ASSERT_EQ(table.failures.size(), c.replicates);
  EXPECT_EQ(table.failures[0].kind, FailureKind::model_failure);
  EXPECT_EQ(exit_code_for(table), 3);

  c.model = ExternalModelConfig{"awk '{print \"oops\"}'", {{"x", 0.0, 1.0}}, false};
  table = run_experiment(c);
  EXPECT_EQ(table.failures.at(0).kind, FailureKind::model_failure);

  EXPECT_EQ(parse_output_lines("1.5\n-2e3\n\n 4 \n", 3), (std::vector<double>{1.5, -2000.0, 4.0}));
  EXPECT_THROW(parse_output_lines("1\n2\n", 3), ModelFailure);
  EXPECT_THROW(parse_output_lines("nan\n", 1), ModelFailure);
  EXPECT_EQ(format_input_line(std::vector<double>{0.5, -1.0, 0.1}), "0.5,-1,0.10000000000000001");
}

TEST(ExternalModel, StochasticProcessGetsReplicatePass) {
  auto c = small_config(false);
  // Noisy process: x1 plus uniform noise from awk's rand(), seeded per batch.
  c.model = ExternalModelConfig{"awk -F, 'BEGIN{srand()} {print $1 + rand()}'",
                                {{"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}}, true};
  c.budget = 500;
  c.replicates = 2;
  const auto table = run_experiment(c);
  EXPECT_TRUE(table.noisy);
  EXPECT_EQ(table.virtual_totals().size(), 2u);
}

TEST(EmitCsv, HeaderRowsAndDeterminism) {
  ResultTable empty;
  EXPECT_EQ(format_csv(empty),
            "replicate,variable,s_raw,t_raw,s_corr,t_corr,bias_s,bias_t,var_s,var_t,t_t_eps,d_hat\n");

  auto c = small_config(true);
  c.replicates = 1;
  const auto table = run_experiment(c);
  const auto csv = format_csv(table);
  EXPECT_EQ(count(csv, "\n"), 1u + 5u);
  EXPECT_NE(csv.find("\n0,t,,"), std::string::npos);
  // 9 significant digits.
  char expected[64];
  std::snprintf(expected, sizeof expected, "\n0,x1,%.9g,%.9g,", table.rows[0].s_raw,
                table.rows[0].t_raw);
  EXPECT_NE(csv.find(expected), std::string::npos);

  const auto dir = scratch_dir();
  emit_csv(table, dir / "a.csv");
  emit_csv(run_experiment(c), dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv"), csv);
  EXPECT_THROW(emit_csv(table, dir / "missing-dir" / "x.csv"), std::runtime_error);
}

TEST(EmitSvg, StructureAndErrors) {
  auto c = small_config(true);
  c.replicates = 100;
  c.budget = 20000;
  const auto table = run_experiment(c);
  const auto svg = format_boxplot_svg(table);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "class=\"panel\""), 2u);
  EXPECT_EQ(count(svg, "class=\"box-group\""), 2u * 4u);
  EXPECT_EQ(count(svg, "class=\"truth\""), 2u * 4u);
  EXPECT_EQ(count(svg, "class=\"virtual-group\""), 1u);
  EXPECT_EQ(svg, format_boxplot_svg(table));

  auto single = small_config(true);
  single.replicates = 1;
  EXPECT_THROW(format_boxplot_svg(run_experiment(single)), ConfigError);

  const auto dir = scratch_dir();
  emit_boxplot_svg(table, dir / "plot.svg");
  EXPECT_EQ(slurp(dir / "plot.svg"), svg);
}

TEST(Config, ParsesAndRejectsUnknownFields) {
  const auto c = parse_config(R"({
    "model": "gfunction",
    "noise": {"alpha": [-0.25, 0.25], "beta": [-1, 1]},
    "budget": 2000, "replicates": 7, "bootstrap_resamples": 10, "master_seed": 9,
    "correction": false, "variance_form": "standard_ratio",
    "outputs": {"csv": "out.csv", "svg": "out.svg"}
  })");
  EXPECT_EQ(std::get<BenchmarkId>(c.model), BenchmarkId::gfunction);
  ASSERT_TRUE(c.noise.has_value());
  EXPECT_DOUBLE_EQ(c.noise->var_beta(), 4.0 / 12.0);
  EXPECT_EQ(c.replicates, 7u);
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_FALSE(c.correction);
  EXPECT_EQ(c.variance_form, VarianceForm::standard_ratio);
  EXPECT_EQ(*c.csv_path, "out.csv");

  const auto ext = parse_config(R"({
    "model": {"command": "./model", "inputs": [{"name": "a", "lower": 0, "upper": 2}],
              "stochastic": true},
    "budget": 100
  })");
  const auto& m = std::get<ExternalModelConfig>(ext.model);
  EXPECT_EQ(m.command, "./model");
  EXPECT_TRUE(m.stochastic);
  EXPECT_EQ(m.inputs.at(0).upper, 2.0);

  EXPECT_THROW(parse_config(R"({"model": "linear", "colour": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": "linear", "noise": {"gamma": [0, 1]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": "linear", "budget": 10})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": "linear", "replicates": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": "cubic"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": "linear")"), ConfigError);
  EXPECT_THROW(parse_config(R"({"budget": 100})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Summary, QuartilesAndMoments) {
  const auto s = summarize(std::vector<double>{4.0, 1.0, 3.0, 2.0, 5.0});
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.q1, 2.0);
  EXPECT_DOUBLE_EQ(s.q3, 4.0);
  EXPECT_DOUBLE_EQ(s.stddev, std::sqrt(2.5));
  EXPECT_EQ(summarize(std::vector<double>{}).count, 0u);
}

TEST(Presets, NamesAndConfigs) {
  for (auto name : {"linear2000", "linear20000", "gfunction2000", "gfunction20000"}) {
    EXPECT_EQ(to_string(parse_preset(name)), name);
  }
  EXPECT_THROW(parse_preset("steel"), ConfigError);
  const auto lin = make_preset_config(Preset::linear2000);
  EXPECT_EQ(lin.budget, 2000u);
  EXPECT_EQ(lin.replicates, 100u);
  EXPECT_EQ(lin.master_seed, 42u);
  EXPECT_DOUBLE_EQ(lin.noise->alpha().upper, 1.0);
  EXPECT_DOUBLE_EQ(lin.noise->beta().upper, 3.0);
  const auto g = make_preset_config(Preset::gfunction20000);
  EXPECT_DOUBLE_EQ(g.noise->alpha().lower, -0.25);
  EXPECT_DOUBLE_EQ(g.noise->beta().lower, -1.0);
}

TEST(Presets, GFunctionCorrectedTotalsOfInertInputs) {
  const auto table = run_preset(Preset::gfunction20000);
  const auto summary = summarize(table);
  for (std::size_t i : {4u, 5u}) {
    EXPECT_NEAR(summary[i].t_corr.mean, 0.00009201, 0.02) << table.variables[i];
  }
  // Noise inflates the raw total of x1 above its clean value.
  EXPECT_GT(summary[0].t_raw.mean, 0.690086);
}

TEST(Presets, CorrectionReducesTotalIndexBias) {
  for (auto preset : {Preset::linear20000, Preset::gfunction20000}) {
    const auto table = run_preset(preset);
    const auto summary = summarize(table);
    for (std::size_t i = 0; i < table.dimension(); ++i) {
      const double truth = table.truth->total[i];
      if (truth >= 0.5) continue;
      EXPECT_LT(std::abs(summary[i].t_corr.mean - truth), std::abs(summary[i].t_raw.mean - truth))
          << to_string(preset) << " " << table.variables[i];
    }
  }
}

TEST(Presets, RawEstimatesAgreeWithAnalyticNoiseOracle) {
  // Replicate means of the noisy estimates sit within 4 standard errors of the
  // population values predicted from the moments of G.
  for (auto preset : {Preset::linear20000, Preset::gfunction20000}) {
    const auto config = make_preset_config(preset);
    const auto id = std::get<BenchmarkId>(config.model);
    const auto m = output_moments(id);
    const auto predicted =
        analytic_noised_indices(true_indices(id), m.variance, m.second_moment, *config.noise);
    const auto table = run_experiment(config);
    const double reps = static_cast<double>(table.successful_replicates());
    for (std::size_t i = 0; i < table.dimension(); ++i) {
      const auto s = summarize(table.column(i, &ResultRow::s_raw));
      const auto t = summarize(table.column(i, &ResultRow::t_raw));
      EXPECT_NEAR(s.mean, predicted.main[i], 4.0 * s.stddev / std::sqrt(reps) + 1e-6)
          << to_string(preset) << " S" << i + 1;
      EXPECT_NEAR(t.mean, predicted.total[i], 4.0 * t.stddev / std::sqrt(reps) + 1e-6)
          << to_string(preset) << " T" << i + 1;
    }
    const auto tt = summarize(table.virtual_totals());
    EXPECT_NEAR(tt.mean, predicted.virtual_total, 4.0 * tt.stddev / std::sqrt(reps));
  }
}

TEST(Presets, CorrectedVarianceExceedsRawVariance) {
  // Variables whose clean total lies below 1 - T_t should see inflated spread.
  int eligible = 0, inflated = 0;
  for (auto preset : {Preset::linear2000, Preset::linear20000, Preset::gfunction2000,
                      Preset::gfunction20000}) {
    const auto table = run_preset(preset);
    const double t_t = oracle::mean(table.virtual_totals());
    for (std::size_t i = 0; i < table.dimension(); ++i) {
      if (table.truth->total[i] >= 1.0 - t_t) continue;
      ++eligible;
      const double raw = oracle::sample_variance(table.column(i, &ResultRow::t_raw));
      const double corr = oracle::sample_variance(table.column(i, &ResultRow::t_corr));
      if (corr > raw) ++inflated;
    }
  }
  ASSERT_GT(eligible, 0);
  EXPECT_GE(inflated, static_cast<int>(std::ceil(0.9 * eligible)));
}

TEST(Presets, CorrectedVariancePredictionAtBudget20000) {
  // As-printed variance prediction against the spread of corrected S_1.
  PresetOptions options;
  options.replicates = 1000;
  const auto table = run_preset(Preset::linear20000, options);
  const double empirical = oracle::sample_variance(table.column(0, &ResultRow::s_corr));
  const double predicted = oracle::mean(table.column(0, &ResultRow::var_s));
  EXPECT_GT(predicted, empirical / 3.0);
  EXPECT_LT(predicted, empirical * 3.0);
}

TEST(Cli, ExitCodesAndOutputs) {
  const auto dir = scratch_dir();
  EXPECT_EQ(run_cli("eval --model linear --input 1,0,0,0.7"), 0);
  EXPECT_EQ(run_cli("eval --model gfunction --input 0.5,0.5,0.5,0.5,0.5,2"), 2);
  EXPECT_EQ(run_cli("eval --model nope --input 1"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("preset nope"), 2);

  const auto csv1 = dir / "cli1.csv", csv2 = dir / "cli2.csv", svg = dir / "cli.svg";
  EXPECT_EQ(run_cli("preset linear2000 --replicates 5 --seed 3 --out " + csv1.string() +
                    " --plot " + svg.string()),
            0);
  EXPECT_EQ(run_cli("preset linear2000 --replicates 5 --seed 3 --out " + csv2.string()), 0);
  EXPECT_EQ(slurp(csv1), slurp(csv2));
  EXPECT_EQ(count(slurp(csv1), "\n"), 1u + 5u * 5u);
  EXPECT_TRUE(fs::exists(svg));
  EXPECT_EQ(run_cli("preset linear2000 --replicates 2 --variance-form cubic"), 2);

  const auto config = dir / "cfg.json";
  {
    std::ofstream out(config);
    out << R"({"model": {"command": "exit 1", "inputs": [{"name": "x", "lower": 0, "upper": 1}]},
               "budget": 30, "replicates": 2})";
  }
  EXPECT_EQ(run_cli("run --config " + config.string()), 3);
  {
    std::ofstream out(config);
    out << R"({"model": {"command": "awk '{print 2}'",
                         "inputs": [{"name": "x", "lower": 0, "upper": 1}]},
               "budget": 30, "replicates": 2})";
  }
  EXPECT_EQ(run_cli("run --config " + config.string()), 4);
  {
    std::ofstream out(config);
    out << R"({"model": "linear", "budget": 100, "replicates": 2, "extra": true})";
  }
  EXPECT_EQ(run_cli("run --config " + config.string()), 2);
  {
    std::ofstream out(config);
    out << R"({"model": "linear", "budget": 140, "replicates": 3, "bootstrap_resamples": 5,
               "outputs": {"csv": ")"
        << (dir / "cfg.csv").string() << R"("}})";
  }
  EXPECT_EQ(run_cli("run --config " + config.string()), 0);
  EXPECT_EQ(count(slurp(dir / "cfg.csv"), "\n"), 1u + 3u * 4u);
}
