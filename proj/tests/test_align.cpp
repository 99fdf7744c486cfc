#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lsalign/align.hpp"
#include "lsalign/error.hpp"
#include "lsalign/golden_section.hpp"
#include "oracles.hpp"

namespace lsalign {
namespace {

Distribution emp(std::vector<double> v) { return EmpiricalDist::from_values(std::move(v)); }

Distribution two_half_intervals() {
  return PiecewiseLinearDist({{-1, 0}, {-0.5, 0.5}, {0.5, 0.5}, {1, 1}});
}

void expect_result_invariants(const Distribution& f, const Distribution& g,
                              const AlignmentResult& res) {
  const double at_optimum = objective_value(f, g, res.metric, res.optimal);
  EXPECT_NEAR(res.distance, at_optimum, 1e-9 * (1 + at_optimum));
  if (res.argmin_h_interval) {
    const auto iv = *res.argmin_h_interval;
    EXPECT_TRUE(iv.contains(res.optimal.h));
    for (double h : {iv.lo, iv.midpoint(), iv.hi}) {
      const double v = objective_value(f, g, res.metric, {res.optimal.sigma, h});
      if (res.metric.is_ks())
        EXPECT_EQ(v, res.distance);
      else
        EXPECT_NEAR(v, res.distance, 1e-9);
    }
  }
}

TEST(GoldenSection, FindsConvexMinimum) {
  const auto m = golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3); }, -5, 7);
  EXPECT_NEAR(m.x, 1.3, 1e-7);
  const auto edge = golden_section_minimize([](double x) { return x; }, 2, 3);
  EXPECT_EQ(edge.x, 2.0);
}

TEST(OptimalShift, ClosedFormAlignsExactly) {
  const auto res = optimal_shift(emp({0, 2}), emp({1, 3}), Metric::mallows(2));
  EXPECT_EQ(res.optimal.h, 1.0);
  EXPECT_EQ(res.optimal.sigma, 1.0);
  EXPECT_EQ(res.distance, 0.0);
}

TEST(OptimalShift, WeightedMedianOfDifferences) {
  const auto f = emp({0, 1, 2});
  const auto g = emp({10, 11, 30});
  const auto res = optimal_shift(f, g, Metric::mallows(1));
  EXPECT_EQ(res.optimal.h, 10.0);
  EXPECT_DOUBLE_EQ(res.distance, 6.0);
  ASSERT_TRUE(res.argmin_h_interval);
  EXPECT_EQ(res.argmin_h_interval->lo, 10.0);
  EXPECT_EQ(res.argmin_h_interval->hi, 10.0);
  const auto grid = merged_grid(f, g);
  const double grid_h = oracle::grid_minimize(
      [&](double h) { return transformed_objective(grid, 1, h, 1); }, 0, 30, 1e-4, 0);
  EXPECT_NEAR(grid_h, 10.0, 1e-4);
  expect_result_invariants(f, g, res);
}

TEST(OptimalShift, TwoHalfIntervalsPlateau) {
  const auto f = two_half_intervals();
  const auto g = PiecewiseLinearDist::uniform(1, 2);
  const auto res = optimal_shift(f, g, Metric::mallows(1));
  ASSERT_TRUE(res.argmin_h_interval);
  EXPECT_EQ(res.argmin_h_interval->lo, 1.0);
  EXPECT_EQ(res.argmin_h_interval->hi, 2.0);
  EXPECT_NEAR(res.distance, 0.5, 1e-12);
  EXPECT_EQ(res.optimal.h, 1.0);
  // The CDF route gives the same plateau value.
  EXPECT_NEAR(mallows_1_via_cdf(affine_image(f, 1, 1.5), g), 0.5, 1e-12);
  EXPECT_GT(mallows_1_via_cdf(affine_image(f, 1, 2.5), g), 0.5 + 1e-3);
  expect_result_invariants(f, g, res);
}

TEST(OptimalShift, KsExactAlignment) {
  const auto res = optimal_shift(emp({0, 1}), emp({10, 11}), Metric::ks());
  EXPECT_EQ(res.optimal.h, 10.0);
  EXPECT_EQ(res.distance, 0.0);
  ASSERT_TRUE(res.argmin_h_interval);
  EXPECT_EQ(res.argmin_h_interval->lo, 10.0);
  EXPECT_EQ(res.argmin_h_interval->hi, 10.0);
}

TEST(OptimalShift, KsPlateauCanonical) {
  // D = 1/2 on [-1, 1]; least-magnitude choice is 0.
  const auto f = emp({0, 2});
  const auto g = emp({1});
  const auto res = optimal_shift(f, g, Metric::ks());
  ASSERT_TRUE(res.argmin_h_interval);
  EXPECT_EQ(res.argmin_h_interval->lo, -1.0);
  EXPECT_EQ(res.argmin_h_interval->hi, 1.0);
  EXPECT_EQ(res.optimal.h, 0.0);
  EXPECT_EQ(res.distance, 0.5);
  expect_result_invariants(f, g, res);
}

TEST(OptimalShift, KsRejectsPiecewiseLinear) {
  EXPECT_THROW(optimal_shift(two_half_intervals(), emp({1}), Metric::ks()), UnsupportedOperation);
}

TEST(OptimalShift, SearchedOrder) {
  const auto f = emp({0, 1, 2, 5});
  const auto g = emp({3, 4, 6, 7.5, 9});
  const auto res = optimal_shift(f, g, Metric::mallows(1.5));
  const auto grid = merged_grid(f, g);
  const double brute = oracle::grid_minimize(
      [&](double h) { return transformed_objective(grid, 1, h, 1.5); }, -10, 20, 1e-3);
  EXPECT_NEAR(res.optimal.h, brute, 1e-5);
  EXPECT_EQ(res.solver, "golden-section");
  expect_result_invariants(f, g, res);
}

TEST(OptimalScale, ClosedForm) {
  const auto b = default_bounds(emp({1, 2}), emp({2, 4}));
  const auto res = optimal_scale(emp({1, 2}), emp({2, 4}), Metric::mallows(2), b);
  EXPECT_DOUBLE_EQ(res.optimal.sigma, 2.0);
  EXPECT_NEAR(res.distance, 0.0, 1e-15);
}

TEST(OptimalScale, ClosedFormWithResidual) {
  // minimize ((-s - 2)^2 + (s - 4)^2) / 2: derivative 2s - 2 = 0.
  const auto f = emp({-1, 1});
  const auto g = emp({2, 4});
  const auto res = optimal_scale(f, g, Metric::mallows(2), default_bounds(f, g));
  EXPECT_DOUBLE_EQ(res.optimal.sigma, 1.0);
  EXPECT_DOUBLE_EQ(res.distance, 3.0);
  const double brute = oracle::grid_minimize(
      [&](double s) { return objective_value(f, g, Metric::mallows(2), {s, 0}); }, 0.01, 5, 1e-3);
  EXPECT_NEAR(brute, 1.0, 1e-5);
}

TEST(OptimalScale, IdentityForEveryMetric) {
  const auto f = emp({1, 2, 3.5, 4});
  const auto b = default_bounds(f, f);
  EXPECT_DOUBLE_EQ(optimal_scale(f, f, Metric::mallows(2), b).optimal.sigma, 1.0);
  const auto ks = optimal_scale(f, f, Metric::ks(), b);
  EXPECT_EQ(ks.optimal.sigma, 1.0);
  EXPECT_EQ(ks.distance, 0.0);
  const auto m1 = optimal_scale(f, f, Metric::mallows(1), b);
  EXPECT_NEAR(m1.optimal.sigma, 1.0, 1e-7);
  EXPECT_NEAR(m1.distance, 0.0, 1e-7);
}

TEST(OptimalScale, ZeroReferenceIsDegenerate) {
  const auto f = emp({0, 0, 0});
  const auto g = emp({1, 2});
  for (const auto& m : {Metric::mallows(1), Metric::mallows(2), Metric::ks()})
    EXPECT_THROW(optimal_scale(f, g, m, default_bounds(f, g)), DegenerateScale);
}

TEST(OptimalScale, NegativeCovarianceClamps) {
  const auto f = emp({1, 2});
  const auto g = emp({-4, -2});
  const auto b = default_bounds(f, g);
  const auto res = optimal_scale(f, g, Metric::mallows(2), b);
  EXPECT_EQ(res.optimal.sigma, b.sigma.lo);
  EXPECT_TRUE(res.degenerate);
}

TEST(OptimalShiftScale, ExactAffine) {
  const auto f = emp({0, 1});
  const auto g = emp({5, 7});
  const auto res = optimal_shift_scale(f, g, Metric::mallows(2), default_bounds(f, g));
  EXPECT_DOUBLE_EQ(res.optimal.sigma, 2.0);
  EXPECT_DOUBLE_EQ(res.optimal.h, 5.0);
  EXPECT_NEAR(res.distance, 0.0, 1e-12);
}

TEST(OptimalShiftScale, PointMassReference) {
  const auto f = emp({3, 3, 3});
  const auto g = emp({1, 2, 6});
  const auto b = default_bounds(f, g);
  const auto res = optimal_shift_scale(f, g, Metric::mallows(2), b);
  EXPECT_TRUE(res.degenerate);
  EXPECT_EQ(res.optimal.sigma, 1.0);
  EXPECT_DOUBLE_EQ(res.optimal.h, 3.0 - 3.0);
  ASSERT_TRUE(res.argmin_sigma_interval);
  EXPECT_EQ(res.argmin_sigma_interval->lo, b.sigma.lo);
  EXPECT_EQ(res.argmin_sigma_interval->hi, b.sigma.hi);
}

TEST(OptimalShiftScale, NestedSearchMatchesGrid) {
  const auto f = emp({0, 1, 1.5, 4, 6});
  const auto g = emp({2, 2.5, 5, 9, 15, 16});
  for (double r : {1.0, 1.5, 3.0}) {
    const auto res = optimal_shift_scale(f, g, Metric::mallows(r), default_bounds(f, g));
    const auto grid = merged_grid(f, g);
    // Brute force over sigma of the brute-force best h.
    auto best_h = [&](double s) {
      return oracle::grid_minimize([&](double h) { return transformed_objective(grid, s, h, r); },
                                   -40, 40, 0.05);
    };
    const double s = oracle::grid_minimize(
        [&](double sg) { return transformed_objective(grid, sg, best_h(sg), r); }, 0.05, 6, 0.01, 3);
    const double brute_value = transformed_objective(grid, s, best_h(s), r);
    EXPECT_LE(res.distance, brute_value + 1e-7) << "r=" << r;
    expect_result_invariants(f, g, res);
  }
}

TEST(OptimalShiftScale, KsIsBestEffort) {
  const auto f = emp({0, 1, 2, 3});
  const auto g = emp({5, 7, 9, 11});
  const auto res = optimal_shift_scale(f, g, Metric::ks(), default_bounds(f, g));
  EXPECT_FALSE(res.certified);
  EXPECT_EQ(res.solver, "ks-grid-refine");
  EXPECT_LE(res.distance, 0.25);
  expect_result_invariants(f, g, res);
  // The coarse grid passes through sigma = 2 exactly here.
  const auto hit = optimal_shift_scale(f, g, Metric::ks(), {{1, 3}, {0, 10}});
  EXPECT_EQ(hit.optimal.sigma, 2.0);
  EXPECT_EQ(hit.optimal.h, 5.0);
  EXPECT_EQ(hit.distance, 0.0);
}

TEST(CanonicalSelect, Examples) {
  const ArgminSet left{{{1, 1}}, [](double) { return std::vector<Interval>{{-2, -1}}; }, 1e-6};
  EXPECT_EQ(canonical_select(left).sigma, 1.0);
  EXPECT_EQ(canonical_select(left).h, -1.0);

  const ArgminSet straddle{{{1, 1}}, [](double) { return std::vector<Interval>{{-1, 3}}; }, 1e-6};
  EXPECT_EQ(canonical_select(straddle).h, 0.0);

  const ArgminSet wide{{{0.5, 2}}, [](double s) { return std::vector<Interval>{{s, s + 1}}; }, 1e-6};
  EXPECT_EQ(canonical_select(wide).sigma, 1.0);
  EXPECT_EQ(canonical_select(wide).h, 1.0);

  const ArgminSet above{{{1.5, 2}, {3, 4}}, [](double) { return std::vector<Interval>{{0, 0}}; }, 1e-6};
  EXPECT_EQ(canonical_select(above).sigma, 1.5);

  const ArgminSet from_zero{{{0, 0.5}}, [](double) { return std::vector<Interval>{{0, 0}}; }, 1e-3};
  EXPECT_EQ(canonical_select(from_zero).sigma, 1e-3);

  const ArgminSet symmetric{{{1, 1}}, [](double) { return std::vector<Interval>{{-3, -2}, {2, 3}}; }, 1e-6};
  EXPECT_EQ(canonical_select(symmetric).h, 2.0);
}

TEST(ProfileShiftCurve, IdenticalSamples) {
  const auto f = emp({0, 1, 3});
  for (const auto& m : {Metric::mallows(1), Metric::ks()}) {
    const auto curve = profile_shift_curve(f, f, m, {-1, 1}, 3);
    ASSERT_EQ(curve.points.size(), 3u);
    EXPECT_EQ(curve.points[1].h, 0.0);
    EXPECT_EQ(curve.points[1].distance, 0.0);
    EXPECT_GT(curve.points[0].distance, 0.0);
    EXPECT_GT(curve.points[2].distance, 0.0);
  }
}

TEST(ProfileShiftCurve, HandEvaluated) {
  const auto curve = profile_shift_curve(emp({0, 2}), emp({1, 3}), Metric::mallows(1), {0, 2}, 3);
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_DOUBLE_EQ(curve.points[0].distance, 1.0);
  EXPECT_DOUBLE_EQ(curve.points[1].distance, 0.0);
  EXPECT_DOUBLE_EQ(curve.points[2].distance, 1.0);
}

TEST(ProfileShiftCurve, Validation) {
  const auto f = emp({0, 1});
  EXPECT_THROW(profile_shift_curve(f, f, Metric::ks(), {-1, 1}, 1), InvalidParameter);
  EXPECT_THROW(profile_shift_curve(f, f, Metric::ks(), {1, 1}, 5), InvalidParameter);
}

TEST(ProfileSurface, MinimumAtExactMap) {
  const auto f = emp({0, 1});
  const auto g = emp({5, 7});
  const SearchBounds b{{0.5, 3.0}, {3.0, 7.0}};
  for (const auto& m : {Metric::mallows(1), Metric::mallows(2), Metric::ks()}) {
    const auto surface = profile_surface(f, g, m, b, 11, 9);
    const auto [i, j] = surface.argmin();
    EXPECT_DOUBLE_EQ(surface.sigmas[i], 2.0);
    EXPECT_DOUBLE_EQ(surface.shifts[j], 5.0);
    EXPECT_NEAR(surface.at(i, j), 0.0, 1e-12);
  }
  const auto same = profile_surface(f, f, Metric::mallows(1), {{0.5, 1.5}, {-1, 1}}, 3, 3);
  const auto [i, j] = same.argmin();
  EXPECT_EQ(same.sigmas[i], 1.0);
  EXPECT_EQ(same.shifts[j], 0.0);
}

class AlignProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};

  // Quarter-integer lattice so that shifts by lattice constants are exact.
  std::vector<double> lattice(std::size_t lo_n, std::size_t hi_n, int lo = -40, int hi = 40) {
    std::uniform_int_distribution<std::size_t> size(lo_n, hi_n);
    std::uniform_int_distribution<int> value(lo, hi);
    std::vector<double> v(size(rng));
    for (auto& x : v) x = value(rng) * 0.25;
    return v;
  }
  std::vector<double> normal(std::size_t lo_n, std::size_t hi_n, double mu, double sd) {
    std::uniform_int_distribution<std::size_t> size(lo_n, hi_n);
    std::normal_distribution<double> nd(mu, sd);
    std::vector<double> v(size(rng));
    for (auto& x : v) x = nd(rng);
    return v;
  }
};

TEST_F(AlignProperties, ShiftRecovery) {
  for (int trial = 0; trial < 100; ++trial) {
    auto x = lattice(1, 30);
    const double c = std::uniform_int_distribution<int>(-40, 40)(rng) * 0.25;
    auto y = x;
    for (auto& v : y) v += c;
    for (const auto& m : {Metric::mallows(1), Metric::ks()}) {
      const auto res = optimal_shift(emp(x), emp(y), m);
      EXPECT_EQ(res.optimal.h, c) << m.label();
      EXPECT_EQ(res.distance, 0.0) << m.label();
    }
    const auto closed = optimal_shift(emp(x), emp(y), Metric::mallows(2));
    EXPECT_NEAR(closed.optimal.h, c, 1e-12);
    EXPECT_NEAR(closed.distance, 0.0, 1e-12);
    const auto searched = optimal_shift(emp(x), emp(y), Metric::mallows(3));
    EXPECT_NEAR(searched.optimal.h, c, 1e-6);
    EXPECT_NEAR(searched.distance, 0.0, 1e-6);
  }
}

TEST_F(AlignProperties, ScaleRecovery) {
  for (int trial = 0; trial < 100; ++trial) {
    auto x = lattice(1, 30, 1, 80);
    const double sigma = std::ldexp(1.0, std::uniform_int_distribution<int>(-2, 3)(rng));
    auto y = x;
    for (auto& v : y) v *= sigma;
    const auto f = emp(x), g = emp(y);
    const auto b = default_bounds(f, g);
    const auto closed = optimal_scale(f, g, Metric::mallows(2), b);
    EXPECT_DOUBLE_EQ(closed.optimal.sigma, sigma);
    EXPECT_NEAR(closed.distance, 0.0, 1e-12);
    const auto ks = optimal_scale(f, g, Metric::ks(), b);
    EXPECT_EQ(ks.distance, 0.0);
    ASSERT_TRUE(ks.argmin_sigma_interval);
    EXPECT_TRUE(ks.argmin_sigma_interval->contains(sigma));
    const auto searched = optimal_scale(f, g, Metric::mallows(1), b);
    EXPECT_NEAR(searched.optimal.sigma, sigma, 1e-6 * sigma);
  }
}

TEST_F(AlignProperties, AffineRecovery) {
  for (int trial = 0; trial < 100; ++trial) {
    auto x = lattice(2, 30);
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) x.push_back(x[0] + 1);
    const double sigma = std::uniform_real_distribution<double>(0.2, 5.0)(rng);
    const double h = std::uniform_real_distribution<double>(-20, 20)(rng);
    auto y = x;
    for (auto& v : y) v = sigma * v + h;
    const auto f = emp(x), g = emp(y);
    const auto res = optimal_shift_scale(f, g, Metric::mallows(2), default_bounds(f, g));
    EXPECT_NEAR(res.optimal.sigma, sigma, 1e-9 * sigma);
    EXPECT_NEAR(res.optimal.h, h, 1e-9 * (1 + std::abs(h) + sigma * 10));
    EXPECT_NEAR(res.distance, 0.0, 1e-9 * (1 + std::abs(h)));
  }
}

TEST_F(AlignProperties, TranslationEquivariance) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = lattice(1, 20);
    auto y = lattice(1, 20);
    const double c = std::uniform_int_distribution<int>(-20, 20)(rng) * 0.5;
    for (const auto& m : {Metric::mallows(1), Metric::mallows(2), Metric::mallows(1.5), Metric::ks()}) {
      const auto base = optimal_shift(emp(x), emp(y), m);
      auto shifted = y;
      for (auto& v : shifted) v += c;
      const auto moved = optimal_shift(emp(x), emp(shifted), m);
      if (base.argmin_h_interval) {
        ASSERT_TRUE(moved.argmin_h_interval);
        EXPECT_NEAR(moved.argmin_h_interval->lo, base.argmin_h_interval->lo + c, 1e-9) << m.label();
        EXPECT_NEAR(moved.argmin_h_interval->hi, base.argmin_h_interval->hi + c, 1e-9) << m.label();
      } else {
        EXPECT_NEAR(moved.optimal.h, base.optimal.h + c, 1e-6) << m.label();
      }
    }
  }
}

TEST_F(AlignProperties, ClosedFormsAgreeWithGridSearch) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = normal(2, 40, 5, 2);
    const auto y = normal(2, 40, 7, 3);
    const auto f = emp(x), g = emp(y);
    const auto grid = merged_grid(f, g);
    const auto b = default_bounds(f, g);

    const auto shift = optimal_shift(f, g, Metric::mallows(2));
    const double h_brute = oracle::grid_minimize(
        [&](double h) { return transformed_objective(grid, 1, h, 2); }, b.h.lo, b.h.hi, 1e-3);
    EXPECT_NEAR(shift.optimal.h, h_brute, 1e-3);

    const auto scale = optimal_scale(f, g, Metric::mallows(2), b);
    const double s_brute = oracle::grid_minimize(
        [&](double s) { return transformed_objective(grid, s, 0, 2); }, b.sigma.lo, b.sigma.hi, 1e-3);
    EXPECT_NEAR(scale.optimal.sigma, s_brute, 1e-3);
  }
}

TEST_F(AlignProperties, JointClosedFormAgreesWithGridSearch) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = normal(3, 30, 5, 2);
    const auto y = normal(3, 30, 7, 3);
    const auto f = emp(x), g = emp(y);
    const auto grid = merged_grid(f, g);
    const auto res = optimal_shift_scale(f, g, Metric::mallows(2), default_bounds(f, g));
    if (res.degenerate) continue;
    double mx = 0, my = 0;
    for (double v : x) mx += v / static_cast<double>(x.size());
    for (double v : y) my += v / static_cast<double>(y.size());
    // For fixed sigma the squared loss is minimized by matching means.
    const double s_brute = oracle::grid_minimize(
        [&](double s) { return transformed_objective(grid, s, my - s * mx, 2); }, 0.001, 8, 1e-3, 4);
    EXPECT_NEAR(res.optimal.sigma, s_brute, 1e-3);
    EXPECT_NEAR(res.optimal.h, my - res.optimal.sigma * mx, 1e-9 * (1 + std::abs(my)));
  }
}

TEST_F(AlignProperties, MeanDifferenceIsClosedFormShift) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = normal(1, 50, 0, 5);
    const auto y = normal(1, 50, 3, 1);
    double mx = 0, my = 0;
    for (double v : oracle::sorted_copy(x)) mx += v;
    for (double v : oracle::sorted_copy(y)) my += v;
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    EXPECT_EQ(optimal_shift(emp(x), emp(y), Metric::mallows(2)).optimal.h, my - mx);
  }
}

TEST_F(AlignProperties, WeightedMedianCharacterization) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = emp(lattice(1, 12));
    const auto g = emp(lattice(1, 12));
    const auto grid = merged_grid(f, g);
    std::vector<double> c, w;
    for (const auto& s : grid.segments()) {
      c.push_back(s.b_start - s.a_start);
      w.push_back(s.weight);
    }
    const auto brute = oracle::brute_weighted_median(c, w);
    const auto res = optimal_shift(f, g, Metric::mallows(1));
    ASSERT_TRUE(res.argmin_h_interval);
    EXPECT_EQ(res.argmin_h_interval->lo, brute.lo);
    EXPECT_EQ(res.argmin_h_interval->hi, brute.hi);
    expect_result_invariants(f, g, res);
  }
}

TEST_F(AlignProperties, KsPlateauIsConstant) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = emp(normal(1, 25, 0, 1));
    const auto g = emp(normal(1, 25, 1, 2));
    const auto res = optimal_shift(f, g, Metric::ks());
    ASSERT_TRUE(res.argmin_h_interval);
    const auto iv = *res.argmin_h_interval;
    for (int k = 0; k <= 10; ++k)
      EXPECT_EQ(ks_objective_shift(f, g, std::lerp(iv.lo, iv.hi, k / 10.0)), res.distance);
    expect_result_invariants(f, g, res);
    EXPECT_TRUE(res.notes.empty());
  }
}

TEST_F(AlignProperties, KsShiftObjectiveDecreasesThenIncreases) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = emp(lattice(1, 20));
    const auto g = emp(normal(1, 20, 2, 4));
    const auto profile = ks_shift_breakpoint_profile(f, g);
    EXPECT_TRUE(decreases_then_increases(profile.values));
    const auto curve = profile_shift_curve(f, g, Metric::ks(), {-30, 30}, 301);
    EXPECT_TRUE(curve.unimodal);
    for (const auto& p : curve.points) {
      EXPECT_GE(p.distance, 0.0);
      EXPECT_LE(p.distance, 1.0);
    }
  }
}

TEST_F(AlignProperties, SurfaceRowsAndColumnsAreConvex) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = emp(normal(2, 30, 1, 2));
    const auto g = emp(normal(2, 30, 3, 2));
    const auto s = profile_surface(f, g, Metric::mallows(1), {{0.1, 3}, {-10, 10}}, 15, 21);
    for (std::size_t i = 0; i < s.sigmas.size(); ++i)
      for (std::size_t j = 1; j + 1 < s.shifts.size(); ++j)
        EXPECT_LE(s.at(i, j), 0.5 * (s.at(i, j - 1) + s.at(i, j + 1)) + 1e-9);
    for (std::size_t j = 0; j < s.shifts.size(); ++j)
      for (std::size_t i = 1; i + 1 < s.sigmas.size(); ++i)
        EXPECT_LE(s.at(i, j), 0.5 * (s.at(i - 1, j) + s.at(i + 1, j)) + 1e-9);
  }
}

TEST_F(AlignProperties, SurfaceMinimumNearJointOptimum) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = emp(normal(5, 30, 1, 2));
    const auto g = emp(normal(5, 30, 3, 3));
    const SearchBounds b{{0.1, 4}, {-10, 10}};
    const auto res = optimal_shift_scale(f, g, Metric::mallows(2), b);
    const auto s = profile_surface(f, g, Metric::mallows(2), b, 40, 81);
    const auto [i, j] = s.argmin();
    const double ds = s.sigmas[1] - s.sigmas[0];
    const double dh = s.shifts[1] - s.shifts[0];
    if (b.h.contains(res.optimal.h)) {
      // The sampled minimum can never beat the true minimum.
      EXPECT_GE(s.at(i, j), res.distance - 1e-12);
      EXPECT_LE(objective_value(f, g, Metric::mallows(2), {s.sigmas[i], s.shifts[j]}),
                objective_value(f, g, Metric::mallows(2),
                                {std::clamp(res.optimal.sigma, b.sigma.lo, b.sigma.hi), res.optimal.h}) +
                    ds * 50 + dh * 5);
    }
  }
}

}  // namespace
}  // namespace lsalign
