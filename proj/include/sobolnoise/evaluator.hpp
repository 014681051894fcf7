#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sobolnoise/models.hpp"
#include "sobolnoise/noise_correction.hpp"
#include "sobolnoise/sampling.hpp"

namespace sobolnoise {

/// Batch evaluator of a (possibly noisy) model over the rows of a matrix.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual const std::vector<InputSpec>& inputs() const = 0;
  std::size_t dimension() const;
  /// True when repeated evaluations at the same point may differ, i.e. the
  /// virtual noise variable has to be estimated.
  virtual bool stochastic() const = 0;

  /// One output per row. `noise` is the stream that feeds injected noise.
  virtual std::vector<double> evaluate(const SampleMatrix& x, RandomStream& noise) const = 0;
};

/// In-process ModelSpec, optionally wrapped in (1 + alpha) G + beta noise.
class CoreEvaluator final : public Evaluator {
 public:
  CoreEvaluator(ModelSpec model, std::optional<NoiseSpec> noise);

  const std::vector<InputSpec>& inputs() const override { return model_.controlled(); }
  bool stochastic() const override { return noise_.has_value(); }
  std::vector<double> evaluate(const SampleMatrix& x, RandomStream& noise) const override;

  const ModelSpec& model() const { return model_; }

 private:
  ModelSpec model_;
  std::optional<NoiseSpec> noise_;
};

/// Subprocess model. Each batch runs `command` once: the rows are written as
/// comma-separated lines to its standard input, and it must print one decimal
/// per line on standard output and exit with status 0.
class ExternalEvaluator final : public Evaluator {
 public:
  ExternalEvaluator(std::string command, std::vector<InputSpec> inputs, bool intrinsic_noise,
                    std::optional<NoiseSpec> noise);

  const std::vector<InputSpec>& inputs() const override { return inputs_; }
  bool stochastic() const override { return intrinsic_noise_ || noise_.has_value(); }
  std::vector<double> evaluate(const SampleMatrix& x, RandomStream& noise) const override;

 private:
  std::string command_;
  std::vector<InputSpec> inputs_;
  bool intrinsic_noise_;
  std::optional<NoiseSpec> noise_;
};

/// Formats one input row as the external protocol's CSV line.
std::string format_input_line(std::span<const double> row);

/// Parses the external protocol's output: one finite decimal per line.
std::vector<double> parse_output_lines(const std::string& text, std::size_t expected);

}  // namespace sobolnoise
