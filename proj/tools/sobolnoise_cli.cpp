// Command-line front end: run configured experiments, built-in presets, or a
// single model evaluation.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sobolnoise/errors.hpp"
#include "sobolnoise/harness.hpp"
#include "sobolnoise/models.hpp"

namespace {

using namespace sobolnoise;

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

void print_summary(const ResultTable& table, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "replicates %zu/%zu succeeded, N = %zu, %zu evaluations each\n",
                table.successful_replicates(), table.replicates_requested, table.n,
                table.evaluations_per_replicate);
  out << line;
  std::snprintf(line, sizeof line, "%-8s %10s %10s %10s %10s %10s %10s\n", "variable", "S_raw",
                "T_raw", "S_corr", "T_corr", "sd(S_c)", "sd(T_c)");
  out << line;
  for (const auto& v : summarize(table)) {
    if (v.variable == "t") {
      std::snprintf(line, sizeof line, "%-8s %10s %10.5f\n", "t", "", v.t_raw.mean);
    } else {
      std::snprintf(line, sizeof line, "%-8s %10.5f %10.5f %10.5f %10.5f %10.5f %10.5f\n",
                    v.variable.c_str(), v.s_raw.mean, v.t_raw.mean, v.s_corr.mean, v.t_corr.mean,
                    v.s_corr.stddev, v.t_corr.stddev);
    }
    out << line;
  }
  for (const auto& f : table.failures) {
    out << "replicate " << f.replicate << " failed: " << f.message << '\n';
  }
}

int finish(const ResultTable& table, const std::optional<std::string>& csv,
           const std::optional<std::string>& svg) {
  print_summary(table, std::cout);
  if (csv) emit_csv(table, *csv);
  if (svg && table.successful_replicates() >= 2) emit_boxplot_svg(table, *svg);
  return exit_code_for(table);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("bad number '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobol' sensitivity indices with noise correction"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  std::string config_path;
  std::optional<std::string> run_csv, run_svg;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", run_csv, "CSV output path");
  run->add_option("--plot", run_svg, "SVG box plot path");

  auto* preset = app.add_subcommand("preset", "Run one of the built-in benchmark studies");
  std::string preset_name;
  PresetOptions options;
  bool no_correction = false;
  std::string variance_form = "printed";
  std::optional<std::string> preset_csv, preset_svg;
  preset->add_option("name", preset_name,
                     "linear2000 | linear20000 | gfunction2000 | gfunction20000 | steel50000")
      ->required();
  preset->add_option("--seed", options.seed, "Master seed")->capture_default_str();
  preset->add_option("--replicates", options.replicates, "Replicate runs")->capture_default_str();
  preset->add_flag("--no-correction", no_correction, "Report raw estimates only");
  preset->add_option("--variance-form", variance_form, "printed | ratio")->capture_default_str();
  preset->add_option("--out", preset_csv, "CSV output path");
  preset->add_option("--plot", preset_svg, "SVG box plot path");

  auto* eval = app.add_subcommand("eval", "Evaluate a benchmark once");
  std::string model_name, input_text;
  eval->add_option("--model", model_name, "linear | gfunction | steel")->required();
  eval->add_option("--input", input_text, "Comma-separated input vector")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      auto config = load_config(config_path);
      if (run_csv) config.csv_path = run_csv;
      if (run_svg) config.svg_path = run_svg;
      const auto table = run_experiment(config);
      return finish(table, config.csv_path, config.svg_path);
    }
    if (*preset) {
      options.correction = !no_correction;
      options.variance_form = parse_variance_form(variance_form);
      const auto table = run_preset(parse_preset(preset_name), options);
      return finish(table, preset_csv, preset_svg);
    }
    if (*eval) {
      const auto x = parse_list(input_text);
      double y = 0.0;
      switch (parse_benchmark(model_name)) {
        case BenchmarkId::linear: y = eval_linear(x); break;
        case BenchmarkId::gfunction: y = eval_gfunction(x); break;
        case BenchmarkId::steel_column: y = eval_steel_column(x); break;
      }
      std::printf("%.17g\n", y);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelFailure& e) {
    std::cerr << "model failure: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  }
  return 0;
}
