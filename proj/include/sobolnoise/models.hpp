#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sobolnoise {

enum class InputRole { controlled, virtual_noise };

/// One model input. Controlled inputs are sampled uniformly on [lower, upper];
/// the virtual noise input has no bounds and stands for "draw fresh noise".
struct InputSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  InputRole role = InputRole::controlled;
};

using CoreFunction = std::function<double(std::span<const double>)>;

/// A deterministic black-box function G over named uniform inputs.
class ModelSpec {
 public:
  ModelSpec(std::string name, std::vector<InputSpec> inputs, CoreFunction core);

  const std::string& name() const { return name_; }
  const std::vector<InputSpec>& inputs() const { return inputs_; }
  /// Controlled inputs only, in declaration order.
  const std::vector<InputSpec>& controlled() const { return controlled_; }
  std::size_t dimension() const { return controlled_.size(); }
  bool has_virtual_noise() const { return controlled_.size() != inputs_.size(); }

  /// Evaluates G on a vector of controlled inputs.
  double operator()(std::span<const double> x) const;

 private:
  std::string name_;
  std::vector<InputSpec> inputs_;
  std::vector<InputSpec> controlled_;
  CoreFunction core_;
};

struct TrueIndices {
  std::vector<double> main;
  std::vector<double> total;
};

enum class BenchmarkId { linear, gfunction, steel_column };

BenchmarkId parse_benchmark(std::string_view name);
std::string_view to_string(BenchmarkId id);

/// 3 x1 + 2 x2 + x3; x4 is accepted and ignored.
double eval_linear(std::span<const double> x);

inline constexpr double kGFunctionCoefficients[6] = {0.0, 0.5, 3.0, 9.0, 99.0, 99.0};

/// Sobol' g-function prod (|4 x_i - 2| + a_i) / (1 + a_i); x must lie in [0,1]^6.
double eval_gfunction(std::span<const double> x, std::span<const double> a);
double eval_gfunction(std::span<const double> x);

inline constexpr double kSteelColumnLength = 7500.0;  // mm
inline constexpr double kSteelSingularTolerance = 1e-9;
inline constexpr double kSteelNominalYield = 500.0;  // F_s, MPa

/// Steel column stress margin. Parameters in order P1, P2, P3, B, D, H, F0, E, Fs.
double eval_steel_column(std::span<const double> p);

/// Built-in benchmark as a ModelSpec. Linear and g-function use U(0,1)
/// inputs; the steel column exposes its 8 uncertain parameters with F_s held
/// at the nominal 500.
ModelSpec make_benchmark(BenchmarkId id);

/// Published reference indices for the analytic benchmarks.
TrueIndices true_indices(BenchmarkId id);

/// Noise-free moments of G under its input distribution, used by the analytic
/// noise oracle. Only the analytic benchmarks are supported.
struct OutputMoments {
  double variance;       // V[G]
  double second_moment;  // E[G^2]
};
OutputMoments output_moments(BenchmarkId id);

}  // namespace sobolnoise
