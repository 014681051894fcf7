#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sobolnoise/evaluator.hpp"
#include "sobolnoise/models.hpp"
#include "sobolnoise/noise_correction.hpp"

namespace sobolnoise {

struct ExternalModelConfig {
  std::string command;
  std::vector<InputSpec> inputs;
  bool stochastic = false;  // the process itself is noisy
};

struct ExperimentConfig {
  std::variant<BenchmarkId, ExternalModelConfig> model = BenchmarkId::linear;
  std::optional<NoiseSpec> noise;
  std::size_t budget = 20000;
  std::size_t replicates = 100;
  std::size_t bootstrap_resamples = kDefaultBootstrapResamples;
  std::uint64_t master_seed = 42;
  bool correction = true;
  VarianceForm variance_form = VarianceForm::as_printed;
  std::optional<std::string> csv_path;
  std::optional<std::string> svg_path;
  /// Reference values drawn as markers in plots; filled for the analytic
  /// benchmarks when left empty.
  std::optional<TrueIndices> truth;

  std::unique_ptr<Evaluator> make_evaluator() const;
  /// Throws ConfigError on invalid settings.
  void validate() const;
};

/// Parses a JSON experiment description; unknown fields are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// One CSV row. Fields that do not apply are NaN and written empty.
struct ResultRow {
  std::size_t replicate = 0;
  std::string variable;
  bool is_virtual = false;
  double s_raw, t_raw, s_corr, t_corr;
  double bias_s, bias_t, var_s, var_t;
  double t_t_eps, d_hat;
};

enum class FailureKind { model_failure, degenerate, guard, other };

struct ReplicateFailure {
  std::size_t replicate = 0;
  FailureKind kind = FailureKind::other;
  std::string message;
};

struct ResultTable {
  std::vector<std::string> variables;
  bool noisy = false;
  bool corrected = false;
  std::size_t replicates_requested = 0;
  std::size_t n = 0;
  std::size_t evaluations_per_replicate = 0;
  std::vector<ResultRow> rows;
  std::vector<ReplicateFailure> failures;
  std::optional<TrueIndices> truth;

  std::size_t dimension() const { return variables.size(); }
  std::size_t successful_replicates() const;
  /// Per-replicate values of one field for controlled variable `index`.
  std::vector<double> column(std::size_t index, double ResultRow::*field) const;
  /// Per-replicate T_t estimates (empty when the run was noise-free).
  std::vector<double> virtual_totals() const;
};

/// Runs every replicate: child seed, design, (noisy) evaluation including the
/// fresh-noise replicate pass, estimation and optional correction. Output is
/// independent of thread interleaving.
ResultTable run_experiment(const ExperimentConfig& config);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0, stddev = 0.0, min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct VariableSummary {
  std::string variable;
  SummaryStats s_raw, t_raw, s_corr, t_corr;
};

/// Across-replicate statistics per controlled variable, plus a trailing "t"
/// entry (t_raw only) for noisy runs.
std::vector<VariableSummary> summarize(const ResultTable& table);

void emit_csv(const ResultTable& table, const std::filesystem::path& path);
std::string format_csv(const ResultTable& table);

/// Box plots of raw and corrected estimates, one panel for main and one for
/// total indices, with truth markers when the table carries reference values.
void emit_boxplot_svg(const ResultTable& table, const std::filesystem::path& path);
std::string format_boxplot_svg(const ResultTable& table);

enum class Preset { linear2000, linear20000, gfunction2000, gfunction20000, steel50000 };

Preset parse_preset(std::string_view name);
std::string_view to_string(Preset preset);

struct PresetOptions {
  std::uint64_t seed = 42;
  std::size_t replicates = 100;
  bool correction = true;
  VarianceForm variance_form = VarianceForm::as_printed;
};

ExperimentConfig make_preset_config(Preset preset, const PresetOptions& options = {});
ResultTable run_preset(Preset preset, const PresetOptions& options = {});

/// Steel column reference indices: noise-free run with F_s = 500 at budget
/// 500000. Cached per seed.
TrueIndices steel_reference(std::uint64_t seed);

/// CLI exit status for a finished run: 0 when any replicate succeeded,
/// 3 for model failures, 4 for guard or degeneracy failures.
int exit_code_for(const ResultTable& table);

}  // namespace sobolnoise
