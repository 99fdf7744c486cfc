#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsalign/distance.hpp"
#include "lsalign/empirical.hpp"

namespace lsalign {

// x -> sigma * x + h applied to samples of F; the transformed CDF is
// F((x - h) / sigma).
struct Transform {
  double sigma = 1.0;
  double h = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct SearchBounds {
  Interval sigma;
  Interval h;

  // Throws InvalidParameter unless 0 < sigma.lo < sigma.hi and h.lo < h.hi.
  void validate() const;
};

// Data-derived brackets:
//   h     in [min G - max F - span, max G - min F + span], span = pooled range
//   sigma in [1e-6, 10 * max(1, spread(G) / spread(F))], spread = IQR or range
SearchBounds default_bounds(const Distribution& f, const Distribution& g);

struct AlignmentResult {
  Transform optimal;
  double distance = 0.0;
  std::optional<Interval> argmin_h_interval;
  std::optional<Interval> argmin_sigma_interval;
  Metric metric;
  std::size_t evaluations = 0;
  std::string solver;
  // False when no convexity or monotonicity result backs the search.
  bool certified = true;
  // Scale was clamped or is not identifiable from the data.
  bool degenerate = false;
  std::vector<std::string> notes;
};

enum class AlignCase { Shift, Scale, ShiftScale };

std::string to_string(AlignCase c);
// Accepts "shift", "scale", "shift-scale". Throws InvalidParameter.
AlignCase parse_align_case(const std::string& text);

AlignmentResult optimal_shift(const Distribution& f, const Distribution& g, const Metric& metric);

// Throws DegenerateScale if every quantile of f is zero.
AlignmentResult optimal_scale(const Distribution& f, const Distribution& g, const Metric& metric,
                              const SearchBounds& bounds);

AlignmentResult optimal_shift_scale(const Distribution& f, const Distribution& g,
                                    const Metric& metric, const SearchBounds& bounds);

AlignmentResult align(const Distribution& f, const Distribution& g, AlignCase which,
                      const Metric& metric, const SearchBounds& bounds);

// D(sigma, h) for either metric.
double objective_value(const Distribution& f, const Distribution& g, const Metric& metric,
                       const Transform& t);

// Set of minimizers of h -> integral |h - (b(u) - sigma a(u))| du over the
// grid, i.e. the weighted median of the quantile differences.
Interval weighted_median_interval(const QuantileGrid& grid, double sigma);

// Argmin set S, described by the intervals making up S_sigma and, for a
// given sigma, the intervals making up S_{h|sigma}.
struct ArgminSet {
  std::vector<Interval> sigma_pieces;
  std::function<std::vector<Interval>(double)> h_given_sigma;
  double sigma_floor = 1e-6;
};

// sigma0 = 1 if 1 is in S_sigma, otherwise inf S_sigma (floored at
// sigma_floor); h0 = element of S_{h|sigma0} of least magnitude, +a over -a.
Transform canonical_select(const ArgminSet& set);

// Element of least magnitude in a union of intervals; +a wins a tie.
double least_magnitude(std::span<const Interval> intervals);

struct ProfilePoint {
  double h;
  double distance;
};

struct ProfileCurve {
  std::vector<ProfilePoint> points;
  // Non-increasing then non-decreasing; always expected for KS.
  bool unimodal = true;
};

// D(1, h) at `steps` evenly spaced shifts covering h_range.
ProfileCurve profile_shift_curve(const Distribution& f, const Distribution& g,
                                 const Metric& metric, Interval h_range, std::size_t steps);

struct ProfileSurface {
  std::vector<double> sigmas;
  std::vector<double> shifts;
  std::vector<double> values;  // row-major, one row per sigma

  double at(std::size_t i_sigma, std::size_t j_h) const {
    return values[i_sigma * shifts.size() + j_h];
  }
  // (row, column) of the smallest value; first one in scan order on ties.
  std::pair<std::size_t, std::size_t> argmin() const;
};

ProfileSurface profile_surface(const Distribution& f, const Distribution& g, const Metric& metric,
                               const SearchBounds& bounds, std::size_t steps_sigma,
                               std::size_t steps_h);

// KS shift objective at every candidate breakpoint y_j - x_i, ascending.
struct BreakpointProfile {
  std::vector<double> shifts;
  std::vector<double> values;
};

BreakpointProfile ks_shift_breakpoint_profile(const Distribution& f, const Distribution& g);

// Non-increasing up to the first global minimum, constant at the minimum
// until its last occurrence, non-decreasing after it. Exact comparisons.
bool decreases_then_increases(std::span<const double> values);

}  // namespace lsalign
