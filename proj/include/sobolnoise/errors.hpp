#pragma once

#include <stdexcept>
#include <string>

namespace sobolnoise {

/// Input outside the domain of a model or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Buckling denominator of the steel column collapsed (E_b close to P).
class SingularConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model output has zero variance over the design; indices are undefined.
class DegenerateModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Noise share T_t is too close to one for the correction to be meaningful.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector lengths or matrix shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// External model process failed or produced unparsable output.
class ModelFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sobolnoise
