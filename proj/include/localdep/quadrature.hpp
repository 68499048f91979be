#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "localdep/errors.hpp"
#include "localdep/model.hpp"
#include "localdep/quadrature_rule.hpp"
#include "localdep/subset.hpp"

namespace localdep {

struct MarginalMoments {
  double mean;
  double variance;
};

namespace detail {

// Mean and variance of one axis at a fixed tensor order, normalizing by the
// computed mass so truncation bias cancels.
inline MarginalMoments marginal_moments_at(const DensityModel& model, std::size_t axis,
                                           int order) {
  double mass = 0.0, first = 0.0, second = 0.0;
  QuadratureScheme::foreach_node(model.support_box(), order,
                                 [&](std::span<const double> p, double w) {
                                   const double f = w * model.density(p);
                                   mass += f;
                                   first += p[axis] * f;
                                   second += p[axis] * p[axis] * f;
                                 });
  const double mean = first / mass;
  return {mean, second / mass - mean * mean};
}

}  // namespace detail

// Marginal mean and variance of one axis by tensor quadrature of the joint
// density, with the scheme's doubling refinement applied to both statistics.
inline MarginalMoments marginal_moments(const DensityModel& model, std::size_t axis) {
  if (axis >= model.dim()) throw DimensionMismatch("marginal_moments: axis out of range");
  QuadratureScheme scheme(model.quad_order());
  MarginalMoments coarse = detail::marginal_moments_at(model, axis, model.quad_order());
  // refine on the worst of the two statistics
  MarginalMoments result = coarse;
  scheme.refine(
      [&](int order) {
        result = detail::marginal_moments_at(model, axis, order);
        return std::abs(result.mean) + std::abs(result.variance);
      },
      model.tol());
  if (!(result.variance > 0.0))
    throw NonPositiveVariance("marginal_moments: axis " + std::to_string(axis) +
                              " has non-positive variance " + std::to_string(result.variance));
  return result;
}

// E(X_target | rest) as a ratio of one-dimensional integrals along the
// target axis with the other coordinates held at `given` (ascending index
// order, target omitted).
inline double conditional_mean_numeric(const DensityModel& model, std::size_t target,
                                       std::span<const double> given) {
  const std::size_t n = model.dim();
  if (target >= n) throw DimensionMismatch("conditional_mean_numeric: target out of range");
  if (given.size() != n - 1)
    throw DimensionMismatch("conditional_mean_numeric: expected " + std::to_string(n - 1) +
                            " conditioning values");
  std::vector<double> point(n);
  for (std::size_t i = 0, k = 0; i < n; ++i)
    if (i != target) point[i] = given[k++];

  const Interval iv = model.support_box()[target];
  QuadratureScheme scheme(model.quad_order());
  const auto slice_ratio = [&](int order) {
    const Rule1D& rule = mapped_rule(iv.lo, iv.hi, order);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      point[target] = rule.nodes[i];
      const double f = rule.weights[i] * model.density(point);
      num += rule.nodes[i] * f;
      den += f;
    }
    if (den <= 1e-300)
      throw ZeroDensitySlice("conditional_mean_numeric: conditioning slice has no mass");
    return num / den;
  };
  return scheme.refine(slice_ratio, model.tol()).value;
}

// Standardized mixed central moment E[prod_{i in S} (X_i - mu_i)/sigma_i]
// by tensor quadrature; marginal means and sigmas are recomputed at each
// refinement order so the whole pipeline converges together.
inline double mixed_central_moment_numeric(const DensityModel& model,
                                           std::span<const std::size_t> subset) {
  if (subset.size() < 2)
    throw InvalidSubset("mixed_central_moment_numeric: need at least 2 indices");
  for (std::size_t a = 0; a < subset.size(); ++a) {
    if (subset[a] >= model.dim())
      throw DimensionMismatch("mixed_central_moment_numeric: index out of range");
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      if (subset[a] == subset[b])
        throw InvalidSubset("mixed_central_moment_numeric: repeated index");
  }

  QuadratureScheme scheme(model.quad_order());
  const auto standardized_moment = [&](int order) {
    const std::size_t k = subset.size();
    std::vector<double> mean(k), sigma(k);
    for (std::size_t a = 0; a < k; ++a) {
      const MarginalMoments mm = detail::marginal_moments_at(model, subset[a], order);
      if (!(mm.variance > 0.0))
        throw NonPositiveVariance("mixed_central_moment_numeric: non-positive variance");
      mean[a] = mm.mean;
      sigma[a] = std::sqrt(mm.variance);
    }
    double mass = 0.0, moment = 0.0;
    QuadratureScheme::foreach_node(model.support_box(), order,
                                   [&](std::span<const double> p, double w) {
                                     const double f = w * model.density(p);
                                     mass += f;
                                     double prod = f;
                                     for (std::size_t a = 0; a < k; ++a)
                                       prod *= (p[subset[a]] - mean[a]) / sigma[a];
                                     moment += prod;
                                   });
    return moment / mass;
  };
  return scheme.refine(standardized_moment, model.tol()).value;
}

// Backend over an arbitrary density for dependence evaluation. Marginal
// means and sigmas are computed once up front; everything else is pure.
class QuadratureBackend {
 public:
  explicit QuadratureBackend(DensityModel model) : model_(std::move(model)) {
    const std::size_t n = model_.dim();
    means_.reserve(n);
    sigmas_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const MarginalMoments mm = marginal_moments(model_, i);
      means_.push_back(mm.mean);
      sigmas_.push_back(std::sqrt(mm.variance));
    }
  }

  std::size_t dim() const { return model_.dim(); }
  double mean(std::size_t i) const { return means_[i]; }
  double sigma(std::size_t i) const { return sigmas_[i]; }

  double conditional_mean(std::size_t target, std::span<const double> rest) const {
    return conditional_mean_numeric(model_, target, rest);
  }

  double mixed_central_moment(SubsetMask mask) const {
    const std::vector<std::size_t> idx = subset_indices(mask);
    return mixed_central_moment_numeric(model_, idx);
  }

  double density(std::span<const double> p) const { return model_.density(p); }

  const DensityModel& model() const { return model_; }

 private:
  DensityModel model_;
  std::vector<double> means_;
  std::vector<double> sigmas_;
};

}  // namespace localdep
