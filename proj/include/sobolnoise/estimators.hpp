#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sobolnoise/sampling.hpp"

namespace sobolnoise {

/// Model outputs over a pick-freeze design. `y_replicate`, when present, is a
/// second independent noisy evaluation of A's rows: it realizes the virtual
/// noise variable t.
struct EvaluationBundle {
  std::vector<double> y_a;
  std::vector<double> y_b;
  std::vector<std::vector<double>> y_mixed;
  std::optional<std::vector<double>> y_replicate;

  std::size_t rows() const { return y_a.size(); }
  /// Throws ShapeError / DegenerateModel on inconsistent or non-finite data.
  void validate() const;
};

struct IndexEstimateSet {
  std::vector<double> main;
  std::vector<double> total;
  std::optional<double> virtual_total;
  double d_hat = 0.0;
  std::vector<double> var_main;
  std::vector<double> var_total;
  std::optional<double> var_virtual;
  std::size_t n = 0;
};

/// Pooled population variance of y_a ++ y_b (normalized by 2N).
/// Throws DegenerateModel if the output is constant.
double estimate_total_variance(std::span<const double> y_a, std::span<const double> y_b);

/// First-order index: mean((y_b - m) * (y_mixed - y_a)) / d_hat, where m is the
/// pooled mean of y_a and y_b.
double estimate_main(std::span<const double> y_a, std::span<const double> y_b,
                     std::span<const double> y_mixed, double d_hat);

/// Jansen total index: mean((y_a - y_other)^2) / (2 d_hat). With y_other the
/// hybrid A_B^i this estimates T_i; with a fresh-noise re-evaluation of A it
/// estimates the virtual total T_t.
double estimate_jansen_total(std::span<const double> y_a, std::span<const double> y_other,
                             double d_hat);

struct BootstrapVariances {
  std::vector<double> var_main;
  std::vector<double> var_total;
  std::optional<double> var_virtual;
};

inline constexpr std::size_t kDefaultBootstrapResamples = 100;

/// Resamples rows jointly (with replacement) and reports the sample variance of
/// every re-estimated index. Resample b draws from stream kBootstrapBase + b of
/// `seed`. A resample with zero output variance contributes zero indices.
BootstrapVariances bootstrap_variances(const EvaluationBundle& bundle, std::size_t resamples,
                                       std::uint64_t seed);

/// All point estimates plus bootstrap variances. `resamples == 0` skips the
/// bootstrap and reports zero variances.
IndexEstimateSet estimate_all(const PickFreezeDesign& design, const EvaluationBundle& bundle,
                              std::size_t resamples, std::uint64_t seed);

}  // namespace sobolnoise
