#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "localdep/errors.hpp"
#include "localdep/matrix.hpp"
#include "localdep/quadrature_rule.hpp"

namespace localdep {

// Dense factorizations and subset expansion stop being practical past this.
inline constexpr std::size_t kMaxDimension = 16;

// Full tensor-product moments grow as nodes^dim; past four axes the
// quadrature oracle is no longer usable.
inline constexpr std::size_t kMaxNumericDimension = 4;

class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_)
      if (!std::isfinite(c)) throw NonFiniteEntry("Point: coordinates must be finite");
  }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  operator std::span<const double>() const { return coords_; }

 private:
  std::vector<double> coords_;
};

class MeanVector {
 public:
  MeanVector() = default;
  MeanVector(std::initializer_list<double> values) : MeanVector(std::vector<double>(values)) {}
  explicit MeanVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw DimensionMismatch("MeanVector: need at least 2 entries");
    if (values_.size() > kMaxDimension)
      throw DimensionTooLarge("MeanVector: dimension exceeds " + std::to_string(kMaxDimension));
    for (double v : values_)
      if (!std::isfinite(v)) throw NonFiniteEntry("MeanVector: entries must be finite");
  }

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Validated symmetric positive definite covariance. Construction runs the
// full gauntlet: finiteness, symmetry (tiny asymmetry is averaged away,
// anything larger is rejected), positive diagonal, and a Cholesky
// factorization whose smallest pivot must clear 1e-10 times the largest
// diagonal entry. The factor is kept for downstream solves.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix entries) {
    const std::size_t n = entries.rows();
    if (entries.cols() != n) throw DimensionMismatch("CovarianceMatrix: matrix must be square");
    if (n < 2) throw DimensionMismatch("CovarianceMatrix: need dimension >= 2");
    if (n > kMaxDimension)
      throw DimensionTooLarge("CovarianceMatrix: dimension exceeds " +
                              std::to_string(kMaxDimension));

    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(entries(i, j)))
          throw NonFiniteEntry("CovarianceMatrix: entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") is not finite");
        max_abs = std::max(max_abs, std::abs(entries(i, j)));
      }

    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        max_asym = std::max(max_asym, std::abs(entries(i, j) - entries(j, i)));
    if (max_asym > 1e-12 * std::max(max_abs, 1e-300))
      throw NotSymmetric("CovarianceMatrix: asymmetry " + std::to_string(max_asym) +
                         " exceeds 1e-12 relative");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (entries(i, j) + entries(j, i));
        entries(i, j) = avg;
        entries(j, i) = avg;
      }

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(entries(i, i) > 0.0))
        throw NotPositiveDefinite(
            "CovarianceMatrix: diagonal entry " + std::to_string(i) + " is not positive",
            entries(i, i));
      max_diag = std::max(max_diag, entries(i, i));
    }

    CholeskyFactor f = try_cholesky(entries);
    if (!f.success || f.smallest_pivot <= 1e-10 * max_diag)
      throw NotPositiveDefinite("CovarianceMatrix: not positive definite (smallest pivot " +
                                    std::to_string(f.smallest_pivot) + ")",
                                f.smallest_pivot);

    entries_ = std::move(entries);
    lower_ = std::move(f.lower);
    smallest_pivot_ = f.smallest_pivot;
  }

  std::size_t dim() const { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const Matrix& entries() const { return entries_; }
  const Matrix& cholesky() const { return lower_; }
  double smallest_pivot() const { return smallest_pivot_; }

  double sigma(std::size_t i) const { return std::sqrt(entries_(i, i)); }

  double correlation(std::size_t i, std::size_t j) const {
    if (i == j) return 1.0;
    return entries_(i, j) / (sigma(i) * sigma(j));
  }

  // det via the Cholesky pivots
  double determinant() const {
    double d = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) d *= lower_(i, i) * lower_(i, i);
    return d;
  }

 private:
  Matrix entries_;
  Matrix lower_;
  double smallest_pivot_ = 0.0;
};

inline CovarianceMatrix validate_covariance(Matrix entries) {
  return CovarianceMatrix(std::move(entries));
}

inline CovarianceMatrix validate_covariance(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n, rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != m.cols())
      throw DimensionMismatch("covariance rows have unequal lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return CovarianceMatrix(std::move(m));
}

// Closed-form determinant of a 3x3 covariance:
//   s11 s22 s33 + 2 s12 s23 s31 - s13^2 s22 - s12^2 s33 - s23^2 s11
inline double determinant3(const CovarianceMatrix& cov) {
  if (cov.dim() != 3) throw DimensionMismatch("determinant3: covariance must be 3x3");
  return cov(0, 0) * cov(1, 1) * cov(2, 2) + 2.0 * cov(0, 1) * cov(1, 2) * cov(2, 0) -
         cov(0, 2) * cov(0, 2) * cov(1, 1) - cov(0, 1) * cov(0, 1) * cov(2, 2) -
         cov(1, 2) * cov(1, 2) * cov(0, 0);
}

class GaussianModel {
 public:
  GaussianModel(MeanVector mean, CovarianceMatrix cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.dim() != cov_.dim())
      throw DimensionMismatch("GaussianModel: mean has dimension " +
                              std::to_string(mean_.dim()) + " but covariance is " +
                              std::to_string(cov_.dim()) + "x" + std::to_string(cov_.dim()));
  }

  std::size_t dim() const { return mean_.dim(); }
  const MeanVector& mean() const { return mean_; }
  const CovarianceMatrix& cov() const { return cov_; }

 private:
  MeanVector mean_;
  CovarianceMatrix cov_;
};

// An arbitrary joint density over a truncated box, evaluated pointwise.
// Construction checks the basics and that the density integrates to one
// over the box (within tol), which also serves as a nonnegativity sweep
// across the quadrature nodes.
class DensityModel {
 public:
  using DensityFn = std::function<double(std::span<const double>)>;

  DensityModel(std::size_t dim, DensityFn density, std::vector<Interval> support_box,
               int quad_order = 64, double tol = 1e-6)
      : dim_(dim),
        density_(std::move(density)),
        box_(std::move(support_box)),
        quad_order_(quad_order),
        tol_(tol) {
    if (dim_ < 2) throw InvalidModel("DensityModel: need dimension >= 2");
    if (dim_ > kMaxNumericDimension)
      throw DimensionTooLarge("DensityModel: tensor quadrature limited to dimension " +
                              std::to_string(kMaxNumericDimension));
    if (box_.size() != dim_) throw InvalidModel("DensityModel: support box size must match dim");
    for (const Interval& iv : box_)
      if (!(iv.lo < iv.hi))
        throw InvalidModel("DensityModel: each support interval needs lo < hi");
    if (!(tol_ > 0.0)) throw InvalidModel("DensityModel: tol must be positive");
    if (!density_) throw InvalidModel("DensityModel: density callable is empty");

    QuadratureScheme scheme(quad_order_);
    const IntegralEstimate mass = scheme.integrate_refined(
        [this](std::span<const double> p) {
          const double v = density_(p);
          if (!(v >= 0.0))
            throw InvalidModel("DensityModel: density is negative or non-finite at a node");
          return v;
        },
        box_, tol_);
    if (std::abs(mass.value - 1.0) > tol_)
      throw InvalidModel("DensityModel: density integrates to " + std::to_string(mass.value) +
                         " over the box, not 1 within tol");
    mass_ = mass.value;
  }

  std::size_t dim() const { return dim_; }
  double density(std::span<const double> p) const { return density_(p); }
  const std::vector<Interval>& support_box() const { return box_; }
  int quad_order() const { return quad_order_; }
  double tol() const { return tol_; }
  double mass() const { return mass_; }

 private:
  std::size_t dim_;
  DensityFn density_;
  std::vector<Interval> box_;
  int quad_order_;
  double tol_;
  double mass_ = 1.0;
};

}  // namespace localdep
