#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sobolnoise/estimators.hpp"
#include "sobolnoise/models.hpp"
#include "sobolnoise/rng.hpp"

namespace sobolnoise {

struct UniformRange {
  double lower = 0.0;
  double upper = 0.0;

  double mean() const { return 0.5 * (lower + upper); }
  double variance() const { return (upper - lower) * (upper - lower) / 12.0; }
};

/// Stationary noise of the working model Y = (1 + alpha) G(X) + beta, with
/// alpha and beta uniform, mutually independent and independent of X.
class NoiseSpec {
 public:
  NoiseSpec(UniformRange alpha, UniformRange beta);

  const UniformRange& alpha() const { return alpha_; }
  const UniformRange& beta() const { return beta_; }
  double mean_alpha() const { return alpha_.mean(); }
  double var_alpha() const { return alpha_.variance(); }
  double var_beta() const { return beta_.variance(); }
  bool is_zero() const;

  /// One noisy output from a deterministic core value; draws alpha, then beta.
  double apply(double core_value, RandomStream& rng) const;

 private:
  UniformRange alpha_;
  UniformRange beta_;
};

/// (1 + alpha) G(x) + beta with fresh alpha, beta on every call. Two calls at
/// the same x differ only through the noise.
double noisy_eval(const ModelSpec& core, std::span<const double> x, const NoiseSpec& noise,
                  RandomStream& rng);

struct NoisedIndices {
  std::vector<double> main;
  std::vector<double> total;
  double virtual_total = 0.0;
};

/// Population indices of the noisy model predicted from the clean indices and
/// the moments of G:
///   V_F  = (1 + E a)^2 V_G + V a E[G^2] + V b
///   S^e  = (1 + E a)^2 V_G S / V_F
///   T^e  = 1 - (1 + E a)^2 V_G (1 - T) / V_F
///   T_t^e = 1 - (1 + E a)^2 V_G / V_F
NoisedIndices analytic_noised_indices(const TrueIndices& clean, double v_g, double e_g2,
                                      const NoiseSpec& noise);

/// Corrections are refused once T_t reaches 1 - kNoiseGuard.
inline constexpr double kNoiseGuard = 0.01;

double correct_main(double s_eps, double t_t_eps);
double correct_total(double t_eps, double t_t_eps);

/// First-order bias of a corrected index: index * V(T_t) / (1 - T_t)^2.
double correction_bias(double index_corrected, double var_t_t, double t_t_eps);

enum class VarianceForm {
  as_printed,      // (v + c V(T_t)) / (1 - T_t)
  standard_ratio,  // (v + c^2 V(T_t)) / (1 - T_t)^2
};

VarianceForm parse_variance_form(std::string_view name);
std::string_view to_string(VarianceForm form);

/// Variance of a corrected index. `index_coeff` is S_i for main indices and
/// 1 - T_i for total indices.
double corrected_variance(double var_index_eps, double index_coeff, double var_t_t,
                          double t_t_eps, VarianceForm form = VarianceForm::as_printed);

struct CorrectedResult {
  std::vector<double> main;
  std::vector<double> total;
  std::vector<double> bias_main;
  std::vector<double> bias_total;
  std::vector<double> var_main;
  std::vector<double> var_total;
  double t_t_used = 0.0;
  bool correction_applied = false;
};

/// Applies the correction to every variable using raw.virtual_total.
CorrectedResult apply_correction(const IndexEstimateSet& raw,
                                 VarianceForm form = VarianceForm::as_printed);

/// Raw estimates copied through unchanged, correction_applied = false.
CorrectedResult passthrough(const IndexEstimateSet& raw);

}  // namespace sobolnoise
