#include "sobolnoise/estimators.hpp"

#include <cmath>
#include <string>

#include "sobolnoise/errors.hpp"
#include "sobolnoise/rng.hpp"

namespace sobolnoise {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("length mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

void require_positive_variance(double d_hat) {
  if (!(d_hat > 0.0)) throw DegenerateModel("total variance estimate must be positive");
}

double pooled_variance(std::span<const double> y_a, std::span<const double> y_b) {
  const double count = static_cast<double>(y_a.size() + y_b.size());
  double sum = 0.0;
  for (double v : y_a) sum += v;
  for (double v : y_b) sum += v;
  const double mean = sum / count;
  double ss = 0.0;
  for (double v : y_a) ss += (v - mean) * (v - mean);
  for (double v : y_b) ss += (v - mean) * (v - mean);
  return ss / count;
}

// y_b is centred on the pooled mean of y_a and y_b. The expectation is
// unchanged (E[y_mixed - y_a] = 0) but the estimate becomes shift invariant and
// no longer carries a mean^2 term in its variance.
double main_numerator(std::span<const double> y_a, std::span<const double> y_b,
                      std::span<const double> y_mixed) {
  double mean = 0.0;
  for (std::size_t j = 0; j < y_a.size(); ++j) mean += y_a[j] + y_b[j];
  mean /= 2.0 * static_cast<double>(y_a.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < y_a.size(); ++j) acc += (y_b[j] - mean) * (y_mixed[j] - y_a[j]);
  return acc / static_cast<double>(y_a.size());
}

double jansen_numerator(std::span<const double> y_a, std::span<const double> y_other) {
  double acc = 0.0;
  for (std::size_t j = 0; j < y_a.size(); ++j) {
    const double diff = y_a[j] - y_other[j];
    acc += diff * diff;
  }
  return acc / (2.0 * static_cast<double>(y_a.size()));
}

double sample_variance(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

}  // namespace

void EvaluationBundle::validate() const {
  const std::size_t n = y_a.size();
  if (n < 2) throw ShapeError("evaluation bundle needs at least 2 rows");
  auto check = [n](const std::vector<double>& v, const char* what) {
    if (v.size() != n) throw ShapeError(std::string(what) + " has wrong length");
    for (double x : v) {
      if (!std::isfinite(x)) throw DegenerateModel(std::string(what) + " contains non-finite values");
    }
  };
  check(y_a, "yA");
  check(y_b, "yB");
  for (const auto& m : y_mixed) check(m, "yMixed");
  if (y_replicate) check(*y_replicate, "yReplicate");
}

double estimate_total_variance(std::span<const double> y_a, std::span<const double> y_b) {
  require_same_length(y_a, y_b);
  if (y_a.size() < 2) throw ShapeError("need at least 2 rows");
  const double d_hat = pooled_variance(y_a, y_b);
  if (!(d_hat > 0.0)) throw DegenerateModel("model output is constant over the design");
  return d_hat;
}

double estimate_main(std::span<const double> y_a, std::span<const double> y_b,
                     std::span<const double> y_mixed, double d_hat) {
  require_same_length(y_a, y_b);
  require_same_length(y_a, y_mixed);
  require_positive_variance(d_hat);
  return main_numerator(y_a, y_b, y_mixed) / d_hat;
}

double estimate_jansen_total(std::span<const double> y_a, std::span<const double> y_other,
                             double d_hat) {
  require_same_length(y_a, y_other);
  require_positive_variance(d_hat);
  return jansen_numerator(y_a, y_other) / d_hat;
}

BootstrapVariances bootstrap_variances(const EvaluationBundle& bundle, std::size_t resamples,
                                       std::uint64_t seed) {
  if (resamples < 2) throw ConfigError("bootstrap needs at least 2 resamples");
  const std::size_t n = bundle.rows();
  const std::size_t d = bundle.y_mixed.size();
  const bool with_virtual = bundle.y_replicate.has_value();

  std::vector<std::vector<double>> main_draws(d), total_draws(d);
  std::vector<double> virtual_draws;

  std::vector<std::size_t> index(n);
  std::vector<double> a(n), b(n), other(n);
  for (std::size_t rep = 0; rep < resamples; ++rep) {
    RandomStream rng(seed, streams::kBootstrapBase + rep);
    for (auto& k : index) k = static_cast<std::size_t>(rng.below(n));
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = bundle.y_a[index[j]];
      b[j] = bundle.y_b[index[j]];
    }
    const double d_hat = pooled_variance(a, b);
    auto ratio = [d_hat](double numerator) { return d_hat > 0.0 ? numerator / d_hat : 0.0; };
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < n; ++j) other[j] = bundle.y_mixed[i][index[j]];
      main_draws[i].push_back(ratio(main_numerator(a, b, other)));
      total_draws[i].push_back(ratio(jansen_numerator(a, other)));
    }
    if (with_virtual) {
      for (std::size_t j = 0; j < n; ++j) other[j] = (*bundle.y_replicate)[index[j]];
      virtual_draws.push_back(ratio(jansen_numerator(a, other)));
    }
  }

  BootstrapVariances out;
  for (std::size_t i = 0; i < d; ++i) {
    out.var_main.push_back(sample_variance(main_draws[i]));
    out.var_total.push_back(sample_variance(total_draws[i]));
  }
  if (with_virtual) out.var_virtual = sample_variance(virtual_draws);
  return out;
}

IndexEstimateSet estimate_all(const PickFreezeDesign& design, const EvaluationBundle& bundle,
                              std::size_t resamples, std::uint64_t seed) {
  bundle.validate();
  if (bundle.rows() != design.rows() || bundle.y_mixed.size() != design.dimension()) {
    throw ShapeError("evaluation bundle does not match the design");
  }
  IndexEstimateSet out;
  out.n = bundle.rows();
  out.d_hat = estimate_total_variance(bundle.y_a, bundle.y_b);
  for (const auto& y_mixed : bundle.y_mixed) {
    out.main.push_back(estimate_main(bundle.y_a, bundle.y_b, y_mixed, out.d_hat));
    out.total.push_back(estimate_jansen_total(bundle.y_a, y_mixed, out.d_hat));
  }
  if (bundle.y_replicate) {
    out.virtual_total = estimate_jansen_total(bundle.y_a, *bundle.y_replicate, out.d_hat);
  }
  if (resamples == 0) {
    out.var_main.assign(out.main.size(), 0.0);
    out.var_total.assign(out.total.size(), 0.0);
    if (out.virtual_total) out.var_virtual = 0.0;
  } else {
    auto boot = bootstrap_variances(bundle, resamples, seed);
    out.var_main = std::move(boot.var_main);
    out.var_total = std::move(boot.var_total);
    out.var_virtual = boot.var_virtual;
  }
  return out;
}

}  // namespace sobolnoise
