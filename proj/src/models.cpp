#include "sobolnoise/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sobolnoise/errors.hpp"

namespace sobolnoise {

ModelSpec::ModelSpec(std::string name, std::vector<InputSpec> inputs, CoreFunction core)
    : name_(std::move(name)), inputs_(std::move(inputs)), core_(std::move(core)) {
  if (!core_) throw ConfigError("model '" + name_ + "' has no core function");
  int virtual_count = 0;
  for (const auto& in : inputs_) {
    if (in.role == InputRole::virtual_noise) {
      ++virtual_count;
      continue;
    }
    if (!(in.lower < in.upper)) {
      throw ConfigError("input '" + in.name + "' needs lower < upper");
    }
    controlled_.push_back(in);
  }
  if (virtual_count > 1) throw ConfigError("at most one virtual noise input allowed");
  if (controlled_.empty()) throw ConfigError("model '" + name_ + "' has no controlled inputs");
}

double ModelSpec::operator()(std::span<const double> x) const {
  if (x.size() != controlled_.size()) {
    throw ShapeError("model '" + name_ + "' expects " + std::to_string(controlled_.size()) +
                     " inputs, got " + std::to_string(x.size()));
  }
  return core_(x);
}

BenchmarkId parse_benchmark(std::string_view name) {
  if (name == "linear") return BenchmarkId::linear;
  if (name == "gfunction") return BenchmarkId::gfunction;
  if (name == "steel" || name == "steel_column") return BenchmarkId::steel_column;
  throw DomainError("unknown benchmark '" + std::string(name) + "'");
}

std::string_view to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::linear: return "linear";
    case BenchmarkId::gfunction: return "gfunction";
    case BenchmarkId::steel_column: return "steel";
  }
  return "?";
}

double eval_linear(std::span<const double> x) {
  if (x.size() != 4) throw ShapeError("linear model takes 4 inputs");
  return 3.0 * x[0] + 2.0 * x[1] + x[2];
}

double eval_gfunction(std::span<const double> x, std::span<const double> a) {
  if (x.size() != a.size()) throw ShapeError("g-function: x and a differ in length");
  double product = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      throw DomainError("g-function input " + std::to_string(i + 1) + " outside [0,1]");
    }
    if (a[i] < 0.0) throw DomainError("g-function coefficients must be non-negative");
    product *= (std::abs(4.0 * x[i] - 2.0) + a[i]) / (1.0 + a[i]);
  }
  return product;
}

double eval_gfunction(std::span<const double> x) {
  if (x.size() != 6) throw ShapeError("g-function takes 6 inputs");
  return eval_gfunction(x, kGFunctionCoefficients);
}

double eval_steel_column(std::span<const double> p) {
  if (p.size() != 9) throw ShapeError("steel column takes 9 parameters");
  const double load = p[0] + p[1] + p[2];
  const double breadth = p[3];
  const double thickness = p[4];
  const double height = p[5];
  const double deflection = p[6];
  const double modulus = p[7];
  const double yield = p[8];
  if (!(breadth > 0.0 && thickness > 0.0 && height > 0.0 && modulus > 0.0)) {
    throw DomainError("steel column geometry and modulus must be positive");
  }
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double euler = pi2 * modulus * breadth * thickness * height * height /
                       (2.0 * kSteelColumnLength * kSteelColumnLength);
  if (std::abs(euler - load) < kSteelSingularTolerance * euler) {
    throw SingularConfiguration("steel column: buckling load equals applied load");
  }
  const double area = breadth * thickness;
  return yield - load * (1.0 / (2.0 * area) +
                         deflection * euler / (area * height * (euler - load)));
}

namespace {

std::vector<InputSpec> unit_inputs(std::size_t d) {
  std::vector<InputSpec> inputs;
  for (std::size_t i = 0; i < d; ++i) {
    inputs.push_back({"x" + std::to_string(i + 1), 0.0, 1.0, InputRole::controlled});
  }
  return inputs;
}

// Table entries U(m, w) read as centre m, half-width w.
InputSpec centred(std::string name, double centre, double half_width) {
  return {std::move(name), centre - half_width, centre + half_width, InputRole::controlled};
}

}  // namespace

ModelSpec make_benchmark(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::linear:
      return ModelSpec("linear", unit_inputs(4),
                       [](std::span<const double> x) { return eval_linear(x); });
    case BenchmarkId::gfunction:
      return ModelSpec("gfunction", unit_inputs(6),
                       [](std::span<const double> x) { return eval_gfunction(x); });
    case BenchmarkId::steel_column: {
      std::vector<InputSpec> inputs = {
          centred("P1", 450000.0, 50000.0), centred("P2", 600000.0, 100000.0),
          centred("P3", 600000.0, 100000.0), centred("B", 300.0, 9.0),
          centred("D", 20.0, 2.0),           centred("H", 300.0, 15.0),
          centred("F0", 22.5, 7.5),          centred("E", 210000.0, 10000.0)};
      return ModelSpec("steel", std::move(inputs), [](std::span<const double> x) {
        double p[9];
        for (std::size_t i = 0; i < 8; ++i) p[i] = x[i];
        p[8] = kSteelNominalYield;
        return eval_steel_column(p);
      });
    }
  }
  throw DomainError("unknown benchmark");
}

TrueIndices true_indices(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::linear: {
      std::vector<double> s = {9.0 / 14.0, 4.0 / 14.0, 1.0 / 14.0, 0.0};
      return {s, s};
    }
    case BenchmarkId::gfunction:
      return {{0.586781, 0.260792, 0.0366738, 0.00586781, 0.00005868, 0.00005868},
              {0.690086, 0.356173, 0.0563335, 0.00917058, 0.00009201, 0.00009201}};
    case BenchmarkId::steel_column:
      break;
  }
  throw DomainError("no analytic indices for benchmark '" + std::string(to_string(id)) + "'");
}

OutputMoments output_moments(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::linear:
      // Mean 3, variance (9 + 4 + 1) / 12.
      return {14.0 / 12.0, 14.0 / 12.0 + 9.0};
    case BenchmarkId::gfunction: {
      double product = 1.0;
      for (double a : kGFunctionCoefficients) product *= 1.0 + (1.0 / 3.0) / ((1.0 + a) * (1.0 + a));
      const double variance = product - 1.0;
      return {variance, variance + 1.0};
    }
    case BenchmarkId::steel_column:
      break;
  }
  throw DomainError("no analytic moments for benchmark '" + std::string(to_string(id)) + "'");
}

}  // namespace sobolnoise
