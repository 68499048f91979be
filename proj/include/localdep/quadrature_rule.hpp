#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "localdep/errors.hpp"

namespace localdep {

struct Interval {
  double lo;
  double hi;
};

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n,
// seeded with the Chebyshev-like root estimates.
inline Rule1D legendre_rule(int order) {
  Rule1D rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

// Returns the rule mapped to [lo,hi]; rules are cached per (interval, order)
// and reused across calls. The cache only ever grows and entries are
// immutable once inserted, so returned references stay valid and concurrent
// readers are safe.
inline const Rule1D& mapped_rule(double lo, double hi, int order) {
  using Key = std::tuple<int, double, double>;
  static std::map<Key, Rule1D> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.try_emplace(Key{order, lo, hi});
  if (inserted) {
    const Rule1D base = detail::legendre_rule(order);
    const double mid = 0.5 * (hi + lo);
    const double halfw = 0.5 * (hi - lo);
    Rule1D& r = it->second;
    r.nodes.resize(base.nodes.size());
    r.weights.resize(base.weights.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      r.nodes[i] = mid + halfw * base.nodes[i];
      r.weights[i] = halfw * base.weights[i];
    }
  }
  return it->second;
}

struct IntegralEstimate {
  double value;
  double error_estimate;
};

// Fixed-order tensor-product Gauss-Legendre over an axis-aligned box, with
// one node-doubling refinement available on top.
class QuadratureScheme {
 public:
  explicit QuadratureScheme(int nodes_per_axis = 64) : nodes_per_axis_(nodes_per_axis) {
    if (nodes_per_axis_ < 8)
      throw ValidationError("QuadratureScheme: nodes_per_axis must be at least 8");
  }

  int nodes_per_axis() const { return nodes_per_axis_; }

  // Visits every tensor node in row-major order (first axis slowest) and
  // calls visit(point, weight). The iteration order is fixed, so repeated
  // runs accumulate identically.
  template <class Visit>
  static void foreach_node(std::span<const Interval> box, int order, Visit&& visit) {
    const std::size_t dim = box.size();
    std::vector<const Rule1D*> rules(dim);
    for (std::size_t d = 0; d < dim; ++d) rules[d] = &mapped_rule(box[d].lo, box[d].hi, order);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> point(dim);
    for (;;) {
      double w = 1.0;
      for (std::size_t d = 0; d < dim; ++d) {
        point[d] = rules[d]->nodes[idx[d]];
        w *= rules[d]->weights[idx[d]];
      }
      visit(std::span<const double>(point), w);
      // advance the odometer, last axis fastest
      std::size_t d = dim;
      while (d > 0) {
        --d;
        if (++idx[d] < rules[d]->nodes.size()) break;
        idx[d] = 0;
        if (d == 0) return;
      }
      if (dim == 0) return;
    }
  }

  template <class F>
  double integrate(F&& f, std::span<const Interval> box) const {
    return integrate_at(std::forward<F>(f), box, nodes_per_axis_);
  }

  template <class F>
  static double integrate_at(F&& f, std::span<const Interval> box, int order) {
    double sum = 0.0;
    foreach_node(box, order, [&](std::span<const double> p, double w) { sum += w * f(p); });
    return sum;
  }

  // Runs compute(order) at the base order and at twice the base order; if
  // the two estimates differ by more than tol, doubles once more. The
  // reported error estimate is always the gap between the last two passes.
  template <class Compute>
  IntegralEstimate refine(Compute&& compute, double tol) const {
    const double coarse = compute(nodes_per_axis_);
    double fine = compute(2 * nodes_per_axis_);
    double err = std::abs(fine - coarse);
    if (err > tol) {
      const double finer = compute(4 * nodes_per_axis_);
      err = std::abs(finer - fine);
      fine = finer;
      if (err > tol)
        throw IntegrationNotConverged(
            "quadrature did not converge: error estimate " + std::to_string(err) +
                " exceeds tolerance " + std::to_string(tol),
            err);
    }
    return {fine, err};
  }

  template <class F>
  IntegralEstimate integrate_refined(F&& f, std::span<const Interval> box, double tol) const {
    return refine([&](int order) { return integrate_at(f, box, order); }, tol);
  }

 private:
  int nodes_per_axis_;
};

}  // namespace localdep
