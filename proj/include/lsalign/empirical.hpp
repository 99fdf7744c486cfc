#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace lsalign {

// A finite, sorted, nonempty collection of observations.
class Sample {
 public:
  // Sorts the values. Throws EmptySample or NonFiniteValue.
  static Sample from_values(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const;

 private:
  explicit Sample(std::vector<double> sorted) : values_(std::move(sorted)) {}
  std::vector<double> values_;
};

Sample make_sample(std::vector<double> values);

// Step CDF of a sample: F(x) = #{values <= x} / n.
class EmpiricalDist {
 public:
  explicit EmpiricalDist(Sample sample) : sample_(std::move(sample)) {}
  static EmpiricalDist from_values(std::vector<double> values) {
    return EmpiricalDist(Sample::from_values(std::move(values)));
  }

  const Sample& sample() const { return sample_; }
  std::span<const double> values() const { return sample_.values(); }
  std::size_t size() const { return sample_.size(); }

  // P(X <= x)
  double cdf(double x) const;
  // P(X < x)
  double cdf_left(double x) const;
  // inf{x : F(x) >= u} for u in (0, 1].
  double quantile(double u) const;

 private:
  Sample sample_;
};

struct Knot {
  double x;
  double p;
};

// Continuous CDF that interpolates linearly between knots. Flat stretches
// (equal consecutive p) are allowed; the x coordinates must increase strictly.
class PiecewiseLinearDist {
 public:
  explicit PiecewiseLinearDist(std::vector<Knot> knots);

  static PiecewiseLinearDist uniform(double lo, double hi);

  const std::vector<Knot>& knots() const { return knots_; }
  double cdf(double x) const;
  double cdf_left(double x) const { return cdf(x); }
  double quantile(double u) const;
  double min() const { return knots_.front().x; }
  double max() const { return knots_.back().x; }
  double mean() const;

 private:
  std::vector<Knot> knots_;
};

using Distribution = std::variant<EmpiricalDist, PiecewiseLinearDist>;

double cdf_eval(const Distribution& dist, double x);
double cdf_left(const Distribution& dist, double x);
double quantile(const Distribution& dist, double u);

double support_min(const Distribution& dist);
double support_max(const Distribution& dist);
double mean(const Distribution& dist);
bool is_point_mass(const Distribution& dist);
bool is_empirical(const Distribution& dist);

// Distribution of sigma * X + h. Requires sigma > 0.
Distribution affine_image(const Distribution& dist, double sigma, double h);

// Sorted, de-duplicated x locations where the CDF is not locally affine:
// jump points of a step CDF, knots of a piecewise-linear CDF.
std::vector<double> cdf_breakpoints(const Distribution& dist);

// The quantile function restricted to (u_lo, u_hi] is the affine map from
// q_lo (right limit at u_lo) to q_hi (value at u_hi).
struct QuantilePiece {
  double u_lo;
  double u_hi;
  double q_lo;
  double q_hi;
};

std::vector<QuantilePiece> quantile_pieces(const Distribution& dist);

// One cell of the merged probability grid. On the cell both quantile
// functions are affine; the *_start values are right limits at the left edge
// and the *_end values are the values at the right edge.
struct GridSegment {
  double weight;
  double a_start;
  double a_end;
  double b_start;
  double b_end;

  bool is_constant() const { return a_start == a_end && b_start == b_end; }
};

class QuantileGrid {
 public:
  QuantileGrid(std::vector<double> breakpoints, std::vector<GridSegment> segments);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<GridSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  // True when both quantile functions are constant on every cell.
  bool is_step() const { return step_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<GridSegment> segments_;
  bool step_;
};

// Refines the quantile pieces of f (a) and g (b) onto a common partition of
// (0, 1]. Breakpoints include 0 and 1.
QuantileGrid merged_grid(const Distribution& f, const Distribution& g);

}  // namespace lsalign
