#pragma once

#include <stdexcept>
#include <string>

namespace localdep {

// Root of the library's error hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected input: bad model data, malformed grids, impossible dimensions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation that could not be carried out on otherwise valid input.
class ComputationError : public Error {
 public:
  using Error::Error;
};

class NonFiniteEntry : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSymmetric : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveDefinite : public ValidationError {
 public:
  NotPositiveDefinite(const std::string& msg, double smallest_pivot)
      : ValidationError(msg), smallest_pivot_(smallest_pivot) {}
  double smallest_pivot() const { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidSubset : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidModel : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidGrid : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularConditioningBlock : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class IntegrationNotConverged : public ComputationError {
 public:
  IntegrationNotConverged(const std::string& msg, double error_estimate)
      : ComputationError(msg), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

class NonPositiveVariance : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class ZeroDensitySlice : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class MissingRhoTerm : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NonPositiveDensityInStencil : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SingularSystem : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SingularJacobian : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NoConvergence : public ComputationError {
 public:
  NoConvergence(const std::string& msg, std::size_t iterations)
      : ComputationError(msg), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

// Wraps a failure raised while evaluating one node of a grid sweep.
class EvaluationError : public ComputationError {
 public:
  EvaluationError(const std::string& msg, std::size_t node_index)
      : ComputationError(msg), node_index_(node_index) {}
  std::size_t node_index() const { return node_index_; }

 private:
  std::size_t node_index_;
};

}  // namespace localdep
