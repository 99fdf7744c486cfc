#include "lsalign/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsalign/error.hpp"
#include "lsalign/golden_section.hpp"

namespace lsalign {

namespace {

constexpr double kMedianTolerance = 1e-12;
constexpr double kGoldenTolerance = 1e-9;
constexpr std::size_t kKsGridSteps = 201;
constexpr std::size_t kKsRefineSteps = 21;
constexpr int kKsRefineRounds = 3;

const EmpiricalDist& require_empirical(const Distribution& d, const char* what) {
  if (!is_empirical(d))
    throw UnsupportedOperation(std::string(what) + " requires empirical distributions");
  return std::get<EmpiricalDist>(d);
}

double spread(const Distribution& d) {
  const double iqr = quantile(d, 0.75) - quantile(d, 0.25);
  if (iqr > 0.0) return iqr;
  return support_max(d) - support_min(d);
}

struct Difference {
  double c0;
  double c1;
  double weight;
};

std::vector<Difference> differences(const QuantileGrid& grid, double sigma) {
  std::vector<Difference> out;
  out.reserve(grid.size());
  for (const auto& s : grid.segments()) {
    out.push_back({s.b_start - sigma * s.a_start, s.b_end - sigma * s.a_end, s.weight});
  }
  return out;
}

Interval difference_range(const QuantileGrid& grid, double sigma) {
  Interval range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& d : differences(grid, sigma)) {
    range.lo = std::min({range.lo, d.c0, d.c1});
    range.hi = std::max({range.hi, d.c0, d.c1});
  }
  return range;
}

Interval atom_median(std::vector<Difference> items, double half) {
  std::sort(items.begin(), items.end(),
            [](const Difference& a, const Difference& b) { return a.c0 < b.c0; });
  double cumulative = 0.0;
  std::optional<double> lo;
  for (std::size_t k = 0; k < items.size();) {
    const double c = items[k].c0;
    while (k < items.size() && items[k].c0 == c) cumulative += items[k++].weight;
    if (!lo && cumulative >= half - kMedianTolerance) lo = c;
    if (cumulative > half + kMedianTolerance) return {*lo, c};
  }
  return {*lo, items.back().c0};
}

// Atoms and uniformly spread pieces; H is the mixture CDF of c(U).
Interval mixed_median(const std::vector<Difference>& items, double half) {
  std::vector<double> candidates;
  for (const auto& d : items) {
    candidates.push_back(d.c0);
    candidates.push_back(d.c1);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto mass_at = [&](double t, bool inclusive) {
    double total = 0.0;
    for (const auto& d : items) {
      if (d.c0 == d.c1) {
        if (inclusive ? d.c0 <= t : d.c0 < t) total += d.weight;
      } else {
        const double lo = std::min(d.c0, d.c1);
        const double hi = std::max(d.c0, d.c1);
        total += d.weight * std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
      }
    }
    return total;
  };
  auto crossing = [&](std::size_t i) {
    // H is affine on (t_{i-1}, t_i); solve H(t) = half.
    const double t0 = candidates[i - 1];
    const double t1 = candidates[i];
    const double h0 = mass_at(t0, true);
    const double h1 = mass_at(t1, false);
    return t0 + (half - h0) / (h1 - h0) * (t1 - t0);
  };

  Interval out{candidates.front(), candidates.back()};
  bool have_lo = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double t = candidates[i];
    const double right = mass_at(t, true);
    const double left = mass_at(t, false);
    if (!have_lo && right >= half - kMedianTolerance) {
      out.lo = (i > 0 && left > half + kMedianTolerance) ? crossing(i) : t;
      have_lo = true;
    }
    if (right > half + kMedianTolerance) {
      out.hi = (i > 0 && left > half + kMedianTolerance) ? crossing(i) : t;
      break;
    }
  }
  return out;
}

struct LinearMoments {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double raw_aa = 0.0;
  double raw_ab = 0.0;
  double centered_aa = 0.0;
  double centered_ab = 0.0;
};

LinearMoments moments(const QuantileGrid& grid) {
  LinearMoments m;
  for (const auto& s : grid.segments()) {
    m.mean_a += s.weight * 0.5 * (s.a_start + s.a_end);
    m.mean_b += s.weight * 0.5 * (s.b_start + s.b_end);
    m.raw_aa += s.weight * (s.a_start * s.a_start + s.a_start * s.a_end + s.a_end * s.a_end) / 3.0;
    m.raw_ab += s.weight *
                (2.0 * s.a_start * s.b_start + s.a_start * s.b_end + s.a_end * s.b_start +
                 2.0 * s.a_end * s.b_end) /
                6.0;
  }
  for (const auto& s : grid.segments()) {
    const double a0 = s.a_start - m.mean_a;
    const double a1 = s.a_end - m.mean_a;
    const double b0 = s.b_start - m.mean_b;
    const double b1 = s.b_end - m.mean_b;
    m.centered_aa += s.weight * (a0 * a0 + a0 * a1 + a1 * a1) / 3.0;
    m.centered_ab += s.weight * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1) / 6.0;
  }
  return m;
}

// Candidate evaluation points of a piecewise-constant objective: every
// breakpoint plus the midpoint of every gap, in ascending order.
std::vector<double> with_midpoints(const std::vector<double>& breaks) {
  std::vector<double> points;
  points.reserve(2 * breaks.size());
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    if (k > 0) points.push_back(0.5 * (breaks[k - 1] + breaks[k]));
    points.push_back(breaks[k]);
  }
  return points;
}

// Runs of consecutive points that attain the minimum, as closed intervals.
std::vector<Interval> minimizing_runs(const std::vector<double>& points,
                                      const std::vector<double>& values, double best) {
  std::vector<Interval> runs;
  bool open = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (values[k] == best) {
      if (!open) runs.push_back({points[k], points[k]});
      runs.back().hi = points[k];
      open = true;
    } else {
      open = false;
    }
  }
  return runs;
}

std::vector<double> shift_breakpoints(const EmpiricalDist& f, const EmpiricalDist& g) {
  std::vector<double> breaks;
  breaks.reserve(f.size() * g.size());
  for (double x : f.values())
    for (double y : g.values()) breaks.push_back(y - x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

AlignmentResult ks_shift(const Distribution& f, const Distribution& g) {
  const auto& ef = require_empirical(f, "KS shift optimization");
  const auto& eg = require_empirical(g, "KS shift optimization");
  const auto breaks = shift_breakpoints(ef, eg);
  const auto points = with_midpoints(breaks);
  std::vector<double> values(points.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    values[k] = ks_objective_shift(f, g, points[k]);
    best = std::min(best, values[k]);
  }
  const auto runs = minimizing_runs(points, values, best);
  // The argmin set is connected because D decreases then increases.
  const Interval plateau{runs.front().lo, runs.back().hi};

  AlignmentResult result;
  result.metric = Metric::ks();
  result.solver = "ks-breakpoint-enumeration";
  result.evaluations = points.size();
  result.argmin_h_interval = plateau;
  result.optimal = {1.0, least_magnitude(std::span(&plateau, 1))};
  result.distance = ks_objective_shift(f, g, result.optimal.h);
  if (!decreases_then_increases(values) || runs.size() != 1)
    result.notes.push_back("KS shift objective is not monotone around its minimum");
  return result;
}

AlignmentResult degenerate_shift_scale(const Distribution& f, const Distribution& g,
                                       const Metric& metric, const SearchBounds& bounds) {
  AlignmentResult result = optimal_shift(f, g, metric);
  result.argmin_sigma_interval = bounds.sigma;
  result.degenerate = true;
  result.solver = "point-mass-reference/" + result.solver;
  result.notes.push_back("scale is not identifiable: reference sample is a point mass");
  return result;
}

AlignmentResult ks_shift_scale(const Distribution& f, const Distribution& g,
                               const SearchBounds& bounds) {
  require_empirical(f, "KS shift-scale optimization");
  require_empirical(g, "KS shift-scale optimization");
  std::size_t evals = 0;
  Transform best_t{};
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](Interval s_range, Interval h_range, std::size_t steps) {
    for (std::size_t i = 0; i < steps; ++i) {
      const double sigma =
          s_range.lo + s_range.width() * static_cast<double>(i) / static_cast<double>(steps - 1);
      if (!(sigma > 0.0)) continue;
      for (std::size_t j = 0; j < steps; ++j) {
        const double h =
            h_range.lo + h_range.width() * static_cast<double>(j) / static_cast<double>(steps - 1);
        const double v = ks_objective(f, g, sigma, h);
        ++evals;
        if (v < best) {
          best = v;
          best_t = {sigma, h};
        }
      }
    }
  };
  scan(bounds.sigma, bounds.h, kKsGridSteps);
  double cell_sigma = bounds.sigma.width() / static_cast<double>(kKsGridSteps - 1);
  double cell_h = bounds.h.width() / static_cast<double>(kKsGridSteps - 1);
  for (int round = 0; round < kKsRefineRounds; ++round) {
    const Interval s_range{std::max(bounds.sigma.lo, best_t.sigma - cell_sigma),
                           std::min(bounds.sigma.hi, best_t.sigma + cell_sigma)};
    const Interval h_range{best_t.h - cell_h, best_t.h + cell_h};
    scan(s_range, h_range, kKsRefineSteps);
    cell_sigma = s_range.width() / static_cast<double>(kKsRefineSteps - 1);
    cell_h = h_range.width() / static_cast<double>(kKsRefineSteps - 1);
  }

  // Exact plateau in h at the chosen scale.
  AlignmentResult shift = ks_shift(affine_image(f, best_t.sigma, 0.0), g);
  AlignmentResult result;
  result.metric = Metric::ks();
  result.solver = "ks-grid-refine";
  result.certified = false;
  result.optimal = {best_t.sigma, shift.optimal.h};
  result.distance = ks_objective(f, g, result.optimal.sigma, result.optimal.h);
  if (result.distance > best) {
    result.optimal = best_t;
    result.distance = best;
  } else {
    result.argmin_h_interval = shift.argmin_h_interval;
  }
  result.evaluations = evals + shift.evaluations;
  result.notes.push_back("joint KS minimization is a grid search without optimality guarantee");
  return result;
}

}  // namespace

void SearchBounds::validate() const {
  if (!(sigma.lo > 0.0) || !(sigma.hi > sigma.lo) || !std::isfinite(sigma.hi))
    throw InvalidParameter("sigma range must satisfy 0 < min < max");
  if (!(h.hi > h.lo) || !std::isfinite(h.lo) || !std::isfinite(h.hi))
    throw InvalidParameter("h range must satisfy min < max");
}

SearchBounds default_bounds(const Distribution& f, const Distribution& g) {
  const double f_min = support_min(f);
  const double f_max = support_max(f);
  const double g_min = support_min(g);
  const double g_max = support_max(g);
  double span = std::max(f_max, g_max) - std::min(f_min, g_min);
  if (!(span > 0.0)) span = 1.0;
  const double sf = spread(f);
  const double sg = spread(g);
  const double ratio = sf > 0.0 ? sg / sf : 1.0;
  return SearchBounds{{1e-6, 10.0 * std::max(1.0, ratio)},
                      {g_min - f_max - span, g_max - f_min + span}};
}

std::string to_string(AlignCase c) {
  switch (c) {
    case AlignCase::Shift:
      return "shift";
    case AlignCase::Scale:
      return "scale";
    case AlignCase::ShiftScale:
      return "shift-scale";
  }
  return "?";
}

AlignCase parse_align_case(const std::string& text) {
  if (text == "shift") return AlignCase::Shift;
  if (text == "scale") return AlignCase::Scale;
  if (text == "shift-scale") return AlignCase::ShiftScale;
  throw InvalidParameter("unknown case '" + text + "' (expected shift, scale or shift-scale)");
}

double objective_value(const Distribution& f, const Distribution& g, const Metric& metric,
                       const Transform& t) {
  if (metric.is_ks()) return ks_objective(f, g, t.sigma, t.h);
  return transformed_objective(merged_grid(f, g), t.sigma, t.h, metric.r);
}

Interval weighted_median_interval(const QuantileGrid& grid, double sigma) {
  const auto items = differences(grid, sigma);
  double total = 0.0;
  for (const auto& d : items) total += d.weight;
  const double half = 0.5 * total;
  if (grid.is_step()) return atom_median(items, half);
  return mixed_median(items, half);
}

double least_magnitude(std::span<const Interval> intervals) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals) {
    double v;
    if (iv.contains(0.0)) {
      v = 0.0;
    } else {
      v = iv.lo > 0.0 ? iv.lo : iv.hi;
    }
    if (std::abs(v) < std::abs(best) || (std::abs(v) == std::abs(best) && v > best)) best = v;
  }
  return best;
}

Transform canonical_select(const ArgminSet& set) {
  Transform t;
  const bool has_one = std::any_of(set.sigma_pieces.begin(), set.sigma_pieces.end(),
                                   [](const Interval& iv) { return iv.contains(1.0); });
  if (has_one) {
    t.sigma = 1.0;
  } else {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& iv : set.sigma_pieces) inf = std::min(inf, iv.lo);
    t.sigma = inf > 0.0 ? inf : set.sigma_floor;
  }
  const auto shifts = set.h_given_sigma(t.sigma);
  t.h = least_magnitude(shifts);
  return t;
}

AlignmentResult optimal_shift(const Distribution& f, const Distribution& g, const Metric& metric) {
  if (metric.is_ks()) return ks_shift(f, g);

  const double r = metric.r;
  const TransformedObjective objective(f, g, r);
  AlignmentResult result;
  result.metric = metric;
  if (r == 1.0) {
    const Interval iv = weighted_median_interval(objective.grid(), 1.0);
    result.argmin_h_interval = iv;
    result.optimal = canonical_select(
        {{{1.0, 1.0}}, [iv](double) { return std::vector<Interval>{iv}; }, 1e-6});
    result.solver = "weighted-median";
  } else if (r == 2.0) {
    result.optimal = {1.0, mean(g) - mean(f)};
    result.solver = "closed-form";
  } else {
    const Interval bracket = difference_range(objective.grid(), 1.0);
    const auto m = golden_section_minimize([&](double h) { return objective(1.0, h); }, bracket.lo,
                                           bracket.hi, kGoldenTolerance);
    result.optimal = {1.0, m.x};
    result.evaluations = m.evaluations;
    result.solver = "golden-section";
  }
  result.distance = objective(1.0, result.optimal.h);
  ++result.evaluations;
  return result;
}

AlignmentResult optimal_scale(const Distribution& f, const Distribution& g, const Metric& metric,
                              const SearchBounds& bounds) {
  bounds.validate();
  if (is_point_mass(f) && support_min(f) == 0.0)
    throw DegenerateScale("scale is not identifiable: every reference quantile is zero");

  AlignmentResult result;
  result.metric = metric;
  result.optimal.h = 0.0;

  if (metric.is_ks()) {
    const auto& ef = require_empirical(f, "KS scale optimization");
    const auto& eg = require_empirical(g, "KS scale optimization");
    std::vector<double> breaks{bounds.sigma.lo, bounds.sigma.hi};
    for (double x : ef.values()) {
      if (x == 0.0) continue;
      for (double y : eg.values()) {
        const double ratio = y / x;
        if (ratio > bounds.sigma.lo && ratio < bounds.sigma.hi) breaks.push_back(ratio);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const auto points = with_midpoints(breaks);
    std::vector<double> values(points.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
      values[k] = ks_objective_scale(f, g, points[k]);
      best = std::min(best, values[k]);
    }
    const auto runs = minimizing_runs(points, values, best);
    result.optimal = canonical_select(
        {runs, [](double) { return std::vector<Interval>{{0.0, 0.0}}; }, bounds.sigma.lo});
    for (const auto& run : runs) {
      if (run.contains(result.optimal.sigma)) result.argmin_sigma_interval = run;
    }
    result.distance = ks_objective_scale(f, g, result.optimal.sigma);
    result.evaluations = points.size() + 1;
    result.solver = "ks-ratio-enumeration";
    if (runs.size() > 1) result.notes.push_back("KS scale minimum is attained on disjoint plateaus");
    return result;
  }

  const double r = metric.r;
  const TransformedObjective objective(f, g, r);
  if (r == 2.0) {
    const auto m = moments(objective.grid());
    if (m.raw_aa == 0.0)
      throw DegenerateScale("scale is not identifiable: every reference quantile is zero");
    double sigma = m.raw_ab / m.raw_aa;
    if (!(sigma > 0.0)) {
      result.degenerate = true;
      result.notes.push_back("closed-form scale is not positive; clamped to the lower bound");
    }
    sigma = std::clamp(sigma, bounds.sigma.lo, bounds.sigma.hi);
    result.optimal.sigma = sigma;
    result.solver = "closed-form";
  } else {
    const auto m = golden_section_minimize([&](double s) { return objective(s, 0.0); },
                                           bounds.sigma.lo, bounds.sigma.hi, kGoldenTolerance);
    result.optimal.sigma = m.x;
    result.evaluations = m.evaluations;
    result.solver = "golden-section";
  }
  result.distance = objective(result.optimal.sigma, 0.0);
  ++result.evaluations;
  return result;
}

AlignmentResult optimal_shift_scale(const Distribution& f, const Distribution& g,
                                    const Metric& metric, const SearchBounds& bounds) {
  bounds.validate();
  if (is_point_mass(f)) return degenerate_shift_scale(f, g, metric, bounds);
  if (metric.is_ks()) return ks_shift_scale(f, g, bounds);

  const double r = metric.r;
  const TransformedObjective objective(f, g, r);
  AlignmentResult result;
  result.metric = metric;

  if (r == 2.0) {
    const auto m = moments(objective.grid());
    if (!(m.centered_aa > 0.0)) return degenerate_shift_scale(f, g, metric, bounds);
    double sigma = m.centered_ab / m.centered_aa;
    if (!(sigma > 0.0)) {
      result.degenerate = true;
      result.notes.push_back("closed-form scale is not positive; clamped to the lower bound");
    }
    sigma = std::clamp(sigma, bounds.sigma.lo, bounds.sigma.hi);
    result.optimal = {sigma, m.mean_b - sigma * m.mean_a};
    result.solver = "closed-form";
  } else {
    // min over h of a jointly convex function is convex in sigma.
    std::size_t inner_evals = 0;
    auto best_shift = [&](double sigma) {
      if (r == 1.0) {
        const Interval iv = weighted_median_interval(objective.grid(), sigma);
        return least_magnitude(std::span(&iv, 1));
      }
      const Interval bracket = difference_range(objective.grid(), sigma);
      const auto m = golden_section_minimize([&](double h) { return objective(sigma, h); },
                                             bracket.lo, bracket.hi, kGoldenTolerance);
      inner_evals += m.evaluations;
      return m.x;
    };
    const auto outer = golden_section_minimize(
        [&](double sigma) {
          ++inner_evals;
          return objective(sigma, best_shift(sigma));
        },
        bounds.sigma.lo, bounds.sigma.hi, kGoldenTolerance);
    result.optimal = {outer.x, best_shift(outer.x)};
    result.evaluations = inner_evals;
    result.solver = "nested-golden-section";
  }
  result.distance = objective(result.optimal.sigma, result.optimal.h);
  ++result.evaluations;
  return result;
}

AlignmentResult align(const Distribution& f, const Distribution& g, AlignCase which,
                      const Metric& metric, const SearchBounds& bounds) {
  switch (which) {
    case AlignCase::Shift:
      return optimal_shift(f, g, metric);
    case AlignCase::Scale:
      return optimal_scale(f, g, metric, bounds);
    case AlignCase::ShiftScale:
      return optimal_shift_scale(f, g, metric, bounds);
  }
  throw InvalidParameter("unknown alignment case");
}

ProfileCurve profile_shift_curve(const Distribution& f, const Distribution& g,
                                 const Metric& metric, Interval h_range, std::size_t steps) {
  if (steps < 2) throw InvalidParameter("profile needs at least 2 steps");
  if (!(h_range.hi > h_range.lo)) throw InvalidParameter("profile range is empty");
  ProfileCurve curve;
  curve.points.reserve(steps);
  std::optional<TransformedObjective> mallows;
  if (metric.is_mallows()) mallows.emplace(f, g, metric.r);
  std::vector<double> values;
  values.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double h =
        h_range.lo + h_range.width() * static_cast<double>(k) / static_cast<double>(steps - 1);
    const double v = mallows ? (*mallows)(1.0, h) : ks_objective_shift(f, g, h);
    curve.points.push_back({h, v});
    values.push_back(v);
  }
  curve.unimodal = decreases_then_increases(values);
  return curve;
}

std::pair<std::size_t, std::size_t> ProfileSurface::argmin() const {
  const auto it = std::min_element(values.begin(), values.end());
  const auto k = static_cast<std::size_t>(it - values.begin());
  return {k / shifts.size(), k % shifts.size()};
}

ProfileSurface profile_surface(const Distribution& f, const Distribution& g, const Metric& metric,
                               const SearchBounds& bounds, std::size_t steps_sigma,
                               std::size_t steps_h) {
  if (steps_sigma < 2 || steps_h < 2) throw InvalidParameter("surface needs at least 2 steps per axis");
  bounds.validate();
  ProfileSurface surface;
  for (std::size_t i = 0; i < steps_sigma; ++i)
    surface.sigmas.push_back(bounds.sigma.lo + bounds.sigma.width() * static_cast<double>(i) /
                                                   static_cast<double>(steps_sigma - 1));
  for (std::size_t j = 0; j < steps_h; ++j)
    surface.shifts.push_back(bounds.h.lo + bounds.h.width() * static_cast<double>(j) /
                                               static_cast<double>(steps_h - 1));
  std::optional<TransformedObjective> mallows;
  if (metric.is_mallows()) mallows.emplace(f, g, metric.r);
  surface.values.reserve(steps_sigma * steps_h);
  for (double sigma : surface.sigmas) {
    for (double h : surface.shifts) {
      surface.values.push_back(mallows ? (*mallows)(sigma, h) : ks_objective(f, g, sigma, h));
    }
  }
  return surface;
}

BreakpointProfile ks_shift_breakpoint_profile(const Distribution& f, const Distribution& g) {
  const auto& ef = require_empirical(f, "KS breakpoint profile");
  const auto& eg = require_empirical(g, "KS breakpoint profile");
  BreakpointProfile profile;
  profile.shifts = shift_breakpoints(ef, eg);
  profile.values.reserve(profile.shifts.size());
  for (double h : profile.shifts) profile.values.push_back(ks_objective_shift(f, g, h));
  return profile;
}

bool decreases_then_increases(std::span<const double> values) {
  if (values.empty()) return true;
  const auto lowest = std::min_element(values.begin(), values.end());
  const double best = *lowest;
  const auto first = static_cast<std::size_t>(lowest - values.begin());
  std::size_t last = first;
  for (std::size_t k = first; k < values.size(); ++k)
    if (values[k] == best) last = k;
  for (std::size_t k = 0; k < first; ++k)
    if (values[k + 1] > values[k]) return false;
  for (std::size_t k = first; k <= last; ++k)
    if (values[k] != best) return false;
  for (std::size_t k = last; k + 1 < values.size(); ++k)
    if (values[k + 1] < values[k]) return false;
  return true;
}

}  // namespace lsalign
