#pragma once

#include <string>

#include "lsalign/empirical.hpp"

namespace lsalign {

struct Metric {
  enum class Kind { Mallows, KS };

  Kind kind = Kind::Mallows;
  double r = 1.0;  // Mallows order; ignored for KS.

  // Throws InvalidOrder if r < 1.
  static Metric mallows(double r = 1.0);
  static Metric ks() { return Metric{Kind::KS, 1.0}; }

  bool is_mallows() const { return kind == Kind::Mallows; }
  bool is_ks() const { return kind == Kind::KS; }
  // "mallows(r=1)" or "ks".
  std::string label() const;
};

// Lr distance between the quantile functions. Exact for step quantiles and
// for r in {1, 2}; adaptive Gauss-Kronrod otherwise (tolerance 1e-10).
double mallows_distance(const Distribution& f, const Distribution& g, double r);

// Integral of |F(x) - G(x)| over the real line, computed piecewise between
// merged CDF breakpoints. Equals mallows_distance(f, g, 1).
double mallows_1_via_cdf(const Distribution& f, const Distribution& g);

double ks_distance(const Distribution& f, const Distribution& g);

// D(sigma, h) = (integral |sigma F^-1(u) + h - G^-1(u)|^r du)^(1/r).
double transformed_objective(const QuantileGrid& grid, double sigma, double h, double r);

// Mallows objective bound to a grid so it can be evaluated repeatedly.
class TransformedObjective {
 public:
  TransformedObjective(QuantileGrid grid, double r);
  TransformedObjective(const Distribution& f, const Distribution& g, double r)
      : TransformedObjective(merged_grid(f, g), r) {}

  double operator()(double sigma, double h) const {
    return transformed_objective(grid_, sigma, h, r_);
  }
  const QuantileGrid& grid() const { return grid_; }
  double r() const { return r_; }

 private:
  QuantileGrid grid_;
  double r_;
};

// sup_x |F(x - h) - G(x)|. For two step CDFs the comparison x_i + h <= y_j is
// decided as h <= y_j - x_i, so h = y_j - x_i is an exact coincidence.
double ks_objective_shift(const Distribution& f, const Distribution& g, double h);

// sup_x |F(x / sigma) - G(x)|, with sigma * x_i <= y_j decided through the
// ratio y_j / x_i for step CDFs.
double ks_objective_scale(const Distribution& f, const Distribution& g, double sigma);

// sup_x |F((x - h) / sigma) - G(x)|, evaluated on the transformed values.
double ks_objective(const Distribution& f, const Distribution& g, double sigma, double h);

}  // namespace lsalign
