#include "sobolnoise/sampling.hpp"

#include <string>

#include "sobolnoise/errors.hpp"
#include "sobolnoise/rng.hpp"

namespace sobolnoise {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, SeedLineage lineage)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0), lineage_(lineage) {}

SampleMatrix sample_uniform(std::span<const InputSpec> inputs, std::size_t n,
                            std::uint64_t master_seed, std::uint64_t stream) {
  if (n < 2) throw ConfigError("sample size must be at least 2");
  std::vector<const InputSpec*> columns;
  for (const auto& in : inputs) {
    if (in.role != InputRole::controlled) continue;
    if (!(in.lower < in.upper)) throw ConfigError("input '" + in.name + "' needs lower < upper");
    columns.push_back(&in);
  }
  if (columns.empty()) throw ConfigError("no controlled inputs to sample");

  SampleMatrix m(n, columns.size(), {master_seed, stream});
  RandomStream rng(master_seed, stream);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      m.at(r, c) = rng.uniform(columns[c]->lower, columns[c]->upper);
    }
  }
  return m;
}

PickFreezeDesign build_pickfreeze(const SampleMatrix& a, const SampleMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("pick-freeze bases must have the same shape");
  }
  PickFreezeDesign design{a, b, {}, 0};
  design.mixed.reserve(a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    SampleMatrix hybrid = a;
    for (std::size_t r = 0; r < a.rows(); ++r) hybrid.at(r, i) = b.at(r, i);
    design.mixed.push_back(std::move(hybrid));
  }
  design.budget_used = a.rows() * (a.cols() + 2);
  return design;
}

std::size_t budget_to_n(std::size_t budget, std::size_t d, bool noisy) {
  const std::size_t per_row = d + 2 + (noisy ? 1 : 0);
  const std::size_t n = budget / per_row;
  if (n < 2) {
    throw ConfigError("budget " + std::to_string(budget) + " too small: need at least " +
                      std::to_string(2 * per_row) + " evaluations");
  }
  return n;
}

}  // namespace sobolnoise
