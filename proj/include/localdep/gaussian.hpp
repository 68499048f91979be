#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "localdep/errors.hpp"
#include "localdep/matrix.hpp"
#include "localdep/model.hpp"
#include "localdep/subset.hpp"

namespace localdep {

// E(X_target | rest = v) = offset + weights . v, with v holding the other
// coordinates in ascending index order.
struct ConditionalMeanCoeffs {
  std::size_t target_index;
  std::vector<double> weights;
  double offset;

  double evaluate(std::span<const double> rest) const {
    double e = offset;
    for (std::size_t k = 0; k < weights.size(); ++k) e += weights[k] * rest[k];
    return e;
  }
};

inline ConditionalMeanCoeffs conditional_mean_coeffs(const GaussianModel& model,
                                                     std::size_t target) {
  const std::size_t n = model.dim();
  if (target >= n) throw DimensionMismatch("conditional_mean_coeffs: target index out of range");
  std::vector<std::size_t> rest;
  rest.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (i != target) rest.push_back(i);

  Matrix block(n - 1, n - 1);
  std::vector<double> cross(n - 1);
  for (std::size_t a = 0; a < n - 1; ++a) {
    cross[a] = model.cov()(target, rest[a]);
    for (std::size_t b = 0; b < n - 1; ++b) block(a, b) = model.cov()(rest[a], rest[b]);
  }
  const CholeskyFactor f = try_cholesky(block);
  if (!f.success)
    throw SingularConditioningBlock(
        "conditional mean: conditioning block failed to factor (pivot " +
        std::to_string(f.smallest_pivot) + ")");
  ConditionalMeanCoeffs coeffs{target, cholesky_solve(f.lower, cross), 0.0};
  double offset = model.mean()[target];
  for (std::size_t a = 0; a < n - 1; ++a) offset -= coeffs.weights[a] * model.mean()[rest[a]];
  coeffs.offset = offset;
  return coeffs;
}

inline double conditional_mean(const GaussianModel& model, std::size_t target,
                               std::span<const double> given) {
  if (given.size() != model.dim() - 1)
    throw DimensionMismatch("conditional_mean: expected " + std::to_string(model.dim() - 1) +
                            " conditioning values, got " + std::to_string(given.size()));
  return conditional_mean_coeffs(model, target).evaluate(given);
}

inline double pdf(const GaussianModel& model, std::span<const double> p) {
  const std::size_t n = model.dim();
  if (p.size() != n) throw DimensionMismatch("pdf: point dimension does not match model");
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = p[i] - model.mean()[i];
  const std::vector<double> y = forward_solve(model.cov().cholesky(), centered);
  double quad = 0.0;
  for (double v : y) quad += v * v;
  double sqrt_det = 1.0;
  for (std::size_t i = 0; i < n; ++i) sqrt_det *= model.cov().cholesky()(i, i);
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * double(n)) / sqrt_det;
  return norm * std::exp(-0.5 * quad);
}

namespace detail {

// Sum over perfect pairings of products of pairwise correlations. v is
// permuted in place and restored; zero-correlation branches are pruned, so
// subsets containing an index uncorrelated with all others come out as an
// exact zero.
inline double isserlis_pairing(std::span<std::size_t> v, const Matrix& corr) {
  if (v.size() == 0) return 1.0;
  double total = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    std::swap(v[1], v[k]);
    const double r = corr(v[0], v[1]);
    if (r != 0.0) total += r * isserlis_pairing(v.subspan(2), corr);
    std::swap(v[1], v[k]);
  }
  return total;
}

}  // namespace detail

// Standardized mixed central moment E[prod (X_i - mu_i)/sigma_i] over a set
// of distinct indices, via the Gaussian pairing rule: zero for odd sizes,
// sum over perfect matchings of correlation products for even sizes.
inline double mixed_central_moment(const GaussianModel& model,
                                   std::span<const std::size_t> subset) {
  if (subset.size() < 2) throw InvalidSubset("mixed_central_moment: need at least 2 indices");
  for (std::size_t a = 0; a < subset.size(); ++a) {
    if (subset[a] >= model.dim())
      throw DimensionMismatch("mixed_central_moment: index out of range");
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      if (subset[a] == subset[b])
        throw InvalidSubset("mixed_central_moment: repeated index " +
                            std::to_string(subset[a]));
  }
  if (subset.size() % 2 == 1) return 0.0;

  const std::size_t n = model.dim();
  Matrix corr(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) corr(i, j) = model.cov().correlation(i, j);
  std::vector<std::size_t> v(subset.begin(), subset.end());
  return detail::isserlis_pairing(v, corr);
}

// Backend over a Gaussian model for dependence evaluation: closed-form
// conditional means (coefficients precomputed per target) and pairing-rule
// moments.
class GaussianBackend {
 public:
  explicit GaussianBackend(GaussianModel model) : model_(std::move(model)) {
    const std::size_t n = model_.dim();
    coeffs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) coeffs_.push_back(conditional_mean_coeffs(model_, i));
    corr_ = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) corr_(i, j) = model_.cov().correlation(i, j);
  }

  std::size_t dim() const { return model_.dim(); }
  double mean(std::size_t i) const { return model_.mean()[i]; }
  double sigma(std::size_t i) const { return model_.cov().sigma(i); }

  double conditional_mean(std::size_t target, std::span<const double> rest) const {
    return coeffs_[target].evaluate(rest);
  }

  double mixed_central_moment(SubsetMask mask) const {
    std::vector<std::size_t> v = subset_indices(mask);
    if (v.size() % 2 == 1) return 0.0;
    return detail::isserlis_pairing(v, corr_);
  }

  double density(std::span<const double> p) const { return pdf(model_, p); }

  const GaussianModel& model() const { return model_; }
  const ConditionalMeanCoeffs& coeffs(std::size_t target) const { return coeffs_[target]; }

 private:
  GaussianModel model_;
  std::vector<ConditionalMeanCoeffs> coeffs_;
  Matrix corr_;
};

// Wraps the Gaussian as a DensityModel truncated at mean +- half_width
// sigmas per axis (the default 8 loses less than 1e-14 of the mass), so the
// quadrature oracle can be run against the closed forms.
inline DensityModel to_density_model(const GaussianModel& model, double half_width = 8.0,
                                     int quad_order = 64, double tol = 1e-6) {
  std::vector<Interval> box;
  box.reserve(model.dim());
  for (std::size_t i = 0; i < model.dim(); ++i) {
    const double s = model.cov().sigma(i);
    box.push_back({model.mean()[i] - half_width * s, model.mean()[i] + half_width * s});
  }
  GaussianModel copy = model;
  return DensityModel(
      model.dim(), [copy](std::span<const double> p) { return pdf(copy, p); }, std::move(box),
      quad_order, tol);
}

}  // namespace localdep
