#include "lsalign/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lsalign/error.hpp"

namespace lsalign {

namespace {

constexpr double kQuadratureTolerance = 1e-10;

void check_order(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidOrder(r);
}

double abs_pow(double d, double r) {
  const double a = std::abs(d);
  if (r == 1.0) return a;
  if (r == 2.0) return a * a;
  return std::pow(a, r);
}

// Integral over [0, w] of |d(t)|^r where d is affine from d0 to d1.
double segment_power_integral(double w, double d0, double d1, double r) {
  if (d0 == d1) return w * abs_pow(d0, r);
  if (r == 2.0) return w * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
  const bool crosses = (d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0);
  if (r == 1.0) {
    if (!crosses) return w * 0.5 * (std::abs(d0) + std::abs(d1));
    return w * 0.5 * (d0 * d0 + d1 * d1) / std::abs(d1 - d0);
  }
  auto one_sided = [r](double width, double e0, double e1) {
    if (width <= 0.0) return 0.0;
    auto integrand = [=](double t) { return abs_pow(e0 + (e1 - e0) * t / width, r); };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, width, 15, kQuadratureTolerance);
  };
  if (!crosses) return one_sided(w, d0, d1);
  const double t0 = w * d0 / (d0 - d1);
  return one_sided(t0, d0, 0.0) + one_sided(w - t0, 0.0, d1);
}

// Walks two sorted samples in merged order. `compare(i, j)` orders the
// transformed x_i against y_j: negative, zero (tie) or positive.
template <class Compare>
double ks_merge(std::span<const double> x, std::span<const double> y, Compare compare) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  auto take_x = [&] {
    const double v = x[i];
    while (i < n && x[i] == v) ++i;
  };
  auto take_y = [&] {
    const double v = y[j];
    while (j < m && y[j] == v) ++j;
  };
  while (i < n || j < m) {
    if (j == m) {
      take_x();
    } else if (i == n) {
      take_y();
    } else {
      const int c = compare(i, j);
      if (c < 0) {
        take_x();
      } else if (c > 0) {
        take_y();
      } else {
        take_x();
        take_y();
      }
    }
    best = std::max(best, std::abs(static_cast<double>(i) / dn - static_cast<double>(j) / dm));
  }
  return best;
}

double ks_generic(const Distribution& f, const Distribution& g) {
  auto xs = cdf_breakpoints(f);
  const auto ys = cdf_breakpoints(g);
  xs.insert(xs.end(), ys.begin(), ys.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double best = 0.0;
  // Between breakpoints both CDFs are affine, so |F - G| peaks at one-sided
  // limits at breakpoints.
  for (double x : xs) {
    best = std::max(best, std::abs(cdf_eval(f, x) - cdf_eval(g, x)));
    best = std::max(best, std::abs(cdf_left(f, x) - cdf_left(g, x)));
  }
  return best;
}

int sign_compare(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

Metric Metric::mallows(double r) {
  check_order(r);
  return Metric{Kind::Mallows, r};
}

std::string Metric::label() const {
  if (is_ks()) return "ks";
  std::ostringstream os;
  os.precision(12);
  os << "mallows(r=" << r << ")";
  return os.str();
}

double transformed_objective(const QuantileGrid& grid, double sigma, double h, double r) {
  if (!(sigma > 0.0)) throw NonPositiveScale(sigma);
  check_order(r);
  double total = 0.0;
  for (const auto& s : grid.segments()) {
    const double d0 = sigma * s.a_start + h - s.b_start;
    const double d1 = sigma * s.a_end + h - s.b_end;
    total += segment_power_integral(s.weight, d0, d1, r);
  }
  if (r == 1.0) return total;
  if (r == 2.0) return std::sqrt(total);
  return std::pow(total, 1.0 / r);
}

TransformedObjective::TransformedObjective(QuantileGrid grid, double r)
    : grid_(std::move(grid)), r_(r) {
  check_order(r);
}

double mallows_distance(const Distribution& f, const Distribution& g, double r) {
  check_order(r);
  return transformed_objective(merged_grid(f, g), 1.0, 0.0, r);
}

double mallows_1_via_cdf(const Distribution& f, const Distribution& g) {
  auto xs = cdf_breakpoints(f);
  const auto ys = cdf_breakpoints(g);
  xs.insert(xs.end(), ys.begin(), ys.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double lo = xs[k];
    const double hi = xs[k + 1];
    const double d0 = cdf_eval(f, lo) - cdf_eval(g, lo);
    const double d1 = cdf_left(f, hi) - cdf_left(g, hi);
    total += segment_power_integral(hi - lo, d0, d1, 1.0);
  }
  return total;
}

double ks_distance(const Distribution& f, const Distribution& g) {
  if (is_empirical(f) && is_empirical(g)) return ks_objective_shift(f, g, 0.0);
  return ks_generic(f, g);
}

double ks_objective_shift(const Distribution& f, const Distribution& g, double h) {
  if (is_empirical(f) && is_empirical(g)) {
    const auto x = std::get<EmpiricalDist>(f).values();
    const auto y = std::get<EmpiricalDist>(g).values();
    return ks_merge(x, y, [&](std::size_t i, std::size_t j) { return sign_compare(h, y[j] - x[i]); });
  }
  return ks_generic(affine_image(f, 1.0, h), g);
}

double ks_objective_scale(const Distribution& f, const Distribution& g, double sigma) {
  if (!(sigma > 0.0)) throw NonPositiveScale(sigma);
  if (is_empirical(f) && is_empirical(g)) {
    const auto x = std::get<EmpiricalDist>(f).values();
    const auto y = std::get<EmpiricalDist>(g).values();
    return ks_merge(x, y, [&](std::size_t i, std::size_t j) {
      if (x[i] == 0.0) return sign_compare(0.0, y[j]);
      const double ratio = y[j] / x[i];
      return x[i] > 0.0 ? sign_compare(sigma, ratio) : sign_compare(ratio, sigma);
    });
  }
  return ks_generic(affine_image(f, sigma, 0.0), g);
}

double ks_objective(const Distribution& f, const Distribution& g, double sigma, double h) {
  if (!(sigma > 0.0)) throw NonPositiveScale(sigma);
  // Same coincidence rule as the one-parameter optimizers.
  if (sigma == 1.0) return ks_objective_shift(f, g, h);
  if (h == 0.0) return ks_objective_scale(f, g, sigma);
  if (is_empirical(f) && is_empirical(g)) {
    const auto x = std::get<EmpiricalDist>(f).values();
    const auto y = std::get<EmpiricalDist>(g).values();
    return ks_merge(x, y, [&](std::size_t i, std::size_t j) {
      return sign_compare(sigma * x[i] + h, y[j]);
    });
  }
  return ks_generic(affine_image(f, sigma, h), g);
}

}  // namespace lsalign
