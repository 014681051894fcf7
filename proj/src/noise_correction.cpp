#include "sobolnoise/noise_correction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sobolnoise/errors.hpp"

namespace sobolnoise {

NoiseSpec::NoiseSpec(UniformRange alpha, UniformRange beta) : alpha_(alpha), beta_(beta) {
  for (const UniformRange* r : {&alpha_, &beta_}) {
    if (!std::isfinite(r->lower) || !std::isfinite(r->upper) || r->lower > r->upper) {
      throw ConfigError("noise range needs finite lower <= upper");
    }
  }
  if (alpha_.lower <= -1.0) throw ConfigError("multiplicative noise must keep 1 + alpha > 0");
}

bool NoiseSpec::is_zero() const {
  return alpha_.lower == 0.0 && alpha_.upper == 0.0 && beta_.lower == 0.0 && beta_.upper == 0.0;
}

double NoiseSpec::apply(double core_value, RandomStream& rng) const {
  const double alpha = rng.uniform(alpha_.lower, alpha_.upper);
  const double beta = rng.uniform(beta_.lower, beta_.upper);
  return (1.0 + alpha) * core_value + beta;
}

double noisy_eval(const ModelSpec& core, std::span<const double> x, const NoiseSpec& noise,
                  RandomStream& rng) {
  return noise.apply(core(x), rng);
}

NoisedIndices analytic_noised_indices(const TrueIndices& clean, double v_g, double e_g2,
                                      const NoiseSpec& noise) {
  if (!(v_g > 0.0)) throw DomainError("V[G] must be positive");
  if (e_g2 < v_g) throw DomainError("E[G^2] cannot be smaller than V[G]");
  if (clean.main.size() != clean.total.size()) throw ShapeError("main/total length mismatch");

  const double scale = (1.0 + noise.mean_alpha()) * (1.0 + noise.mean_alpha());
  const double signal = scale * v_g;
  const double v_f = signal + noise.var_alpha() * e_g2 + noise.var_beta();
  const double share = signal / v_f;

  NoisedIndices out;
  for (double s : clean.main) out.main.push_back(share * s);
  for (double t : clean.total) out.total.push_back(1.0 - share * (1.0 - t));
  out.virtual_total = 1.0 - share;
  return out;
}

namespace {

void guard(double t_t_eps) {
  if (!(t_t_eps < 1.0 - kNoiseGuard)) {
    throw GuardError("noise share T_t = " + std::to_string(t_t_eps) +
                     " too close to 1; correction refused");
  }
}

}  // namespace

double correct_main(double s_eps, double t_t_eps) {
  guard(t_t_eps);
  return s_eps / (1.0 - t_t_eps);
}

double correct_total(double t_eps, double t_t_eps) {
  guard(t_t_eps);
  return (t_eps - t_t_eps) / (1.0 - t_t_eps);
}

double correction_bias(double index_corrected, double var_t_t, double t_t_eps) {
  guard(t_t_eps);
  if (var_t_t < 0.0) throw DomainError("variance of T_t must be non-negative");
  const double keep = 1.0 - t_t_eps;
  return index_corrected * var_t_t / (keep * keep);
}

VarianceForm parse_variance_form(std::string_view name) {
  if (name == "as_printed" || name == "printed") return VarianceForm::as_printed;
  if (name == "standard_ratio" || name == "ratio") return VarianceForm::standard_ratio;
  throw ConfigError("unknown variance form '" + std::string(name) + "'");
}

std::string_view to_string(VarianceForm form) {
  return form == VarianceForm::as_printed ? "as_printed" : "standard_ratio";
}

double corrected_variance(double var_index_eps, double index_coeff, double var_t_t,
                          double t_t_eps, VarianceForm form) {
  guard(t_t_eps);
  if (var_index_eps < 0.0 || var_t_t < 0.0) throw DomainError("variances must be non-negative");
  const double keep = 1.0 - t_t_eps;
  if (form == VarianceForm::as_printed) return (var_index_eps + index_coeff * var_t_t) / keep;
  return (var_index_eps + index_coeff * index_coeff * var_t_t) / (keep * keep);
}

CorrectedResult passthrough(const IndexEstimateSet& raw) {
  CorrectedResult out;
  out.main = raw.main;
  out.total = raw.total;
  out.bias_main.assign(raw.main.size(), 0.0);
  out.bias_total.assign(raw.total.size(), 0.0);
  out.var_main = raw.var_main;
  out.var_total = raw.var_total;
  out.t_t_used = 0.0;
  out.correction_applied = false;
  return out;
}

CorrectedResult apply_correction(const IndexEstimateSet& raw, VarianceForm form) {
  if (!raw.virtual_total) throw ConfigError("correction needs the virtual total T_t");
  const double t_t = *raw.virtual_total;
  const double var_t = raw.var_virtual.value_or(0.0);
  guard(t_t);

  CorrectedResult out;
  out.t_t_used = t_t;
  out.correction_applied = true;
  for (std::size_t i = 0; i < raw.main.size(); ++i) {
    const double s = correct_main(raw.main[i], t_t);
    const double t = correct_total(raw.total[i], t_t);
    out.main.push_back(s);
    out.total.push_back(t);
    // Plug-in coefficients are population indices, so keep them in [0, 1].
    const double s_coeff = std::clamp(s, 0.0, 1.0);
    const double t_coeff = std::clamp(t, 0.0, 1.0);
    out.bias_main.push_back(correction_bias(s_coeff, var_t, t_t));
    out.bias_total.push_back(correction_bias(t_coeff, var_t, t_t));
    out.var_main.push_back(corrected_variance(raw.var_main[i], s_coeff, var_t, t_t, form));
    out.var_total.push_back(
        corrected_variance(raw.var_total[i], 1.0 - t_coeff, var_t, t_t, form));
  }
  return out;
}

}  // namespace sobolnoise
