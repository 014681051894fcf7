#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sobolnoise/models.hpp"

namespace sobolnoise {

struct SeedLineage {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
};

/// Row-major N x d matrix of input samples.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols, SeedLineage lineage = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SeedLineage& lineage() const { return lineage_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const SampleMatrix& a, const SampleMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  SeedLineage lineage_;
};

/// Base matrices A and B and the column-swapped hybrids A_B^i.
struct PickFreezeDesign {
  SampleMatrix a;
  SampleMatrix b;
  std::vector<SampleMatrix> mixed;  // mixed[i] = A with column i taken from B
  std::size_t budget_used = 0;      // N (d + 2), before the virtual replicate pass

  std::size_t rows() const { return a.rows(); }
  std::size_t dimension() const { return a.cols(); }
};

/// n i.i.d. rows over the controlled inputs, each column uniform on its bounds.
/// Virtual-noise inputs are skipped.
SampleMatrix sample_uniform(std::span<const InputSpec> inputs, std::size_t n,
                            std::uint64_t master_seed, std::uint64_t stream);

PickFreezeDesign build_pickfreeze(const SampleMatrix& a, const SampleMatrix& b);

/// Rows per base matrix for a total evaluation budget:
/// floor(budget / (d + 2 + noisy)). Throws ConfigError when this is below 2.
std::size_t budget_to_n(std::size_t budget, std::size_t d, bool noisy);

}  // namespace sobolnoise
