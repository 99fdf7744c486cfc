#include "lsalign/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsalign/error.hpp"

namespace lsalign {

namespace {

void check_probability(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw InvalidProbability(u);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Sample Sample::from_values(std::vector<double> values) {
  if (values.empty()) throw EmptySample();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NonFiniteValue(i);
  }
  std::sort(values.begin(), values.end());
  return Sample(std::move(values));
}

double Sample::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

Sample make_sample(std::vector<double> values) { return Sample::from_values(std::move(values)); }

double EmpiricalDist::cdf(double x) const {
  auto v = values();
  auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

double EmpiricalDist::cdf_left(double x) const {
  auto v = values();
  auto count = std::lower_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

double EmpiricalDist::quantile(double u) const {
  check_probability(u);
  const auto n = size();
  const double dn = static_cast<double>(n);
  // Smallest k with k/n >= u, using the same rounding as cdf().
  auto k = static_cast<std::size_t>(std::ceil(u * dn));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / dn >= u) --k;
  while (k < n && static_cast<double>(k) / dn < u) ++k;
  return values()[k - 1];
}

PiecewiseLinearDist::PiecewiseLinearDist(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw InvalidDistribution("piecewise-linear CDF needs at least two knots");
  if (knots_.front().p != 0.0 || knots_.back().p != 1.0)
    throw InvalidDistribution("piecewise-linear CDF must run from p = 0 to p = 1");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].x) || !std::isfinite(knots_[i].p))
      throw InvalidDistribution("non-finite knot");
    if (i > 0) {
      if (!(knots_[i].x > knots_[i - 1].x))
        throw InvalidDistribution("knot x values must increase strictly");
      if (knots_[i].p < knots_[i - 1].p)
        throw InvalidDistribution("knot probabilities must be nondecreasing");
    }
  }
}

PiecewiseLinearDist PiecewiseLinearDist::uniform(double lo, double hi) {
  return PiecewiseLinearDist({{lo, 0.0}, {hi, 1.0}});
}

double PiecewiseLinearDist::cdf(double x) const {
  if (x <= knots_.front().x) return 0.0;
  if (x >= knots_.back().x) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double value, const Knot& k) { return value < k.x; });
  const Knot& right = *it;
  const Knot& left = *(it - 1);
  const double t = (x - left.x) / (right.x - left.x);
  return left.p + t * (right.p - left.p);
}

double PiecewiseLinearDist::quantile(double u) const {
  check_probability(u);
  auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                             [](const Knot& k, double value) { return k.p < value; });
  // p_0 = 0 < u, so it > begin; p_last = 1 >= u, so it != end.
  const Knot& right = *it;
  const Knot& left = *(it - 1);
  if (u == right.p) return right.x;
  const double t = (u - left.p) / (right.p - left.p);
  return left.x + t * (right.x - left.x);
}

double PiecewiseLinearDist::mean() const {
  double m = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    m += (knots_[i].p - knots_[i - 1].p) * 0.5 * (knots_[i].x + knots_[i - 1].x);
  }
  return m;
}

double cdf_eval(const Distribution& dist, double x) {
  return std::visit([x](const auto& d) { return d.cdf(x); }, dist);
}

double cdf_left(const Distribution& dist, double x) {
  return std::visit([x](const auto& d) { return d.cdf_left(x); }, dist);
}

double quantile(const Distribution& dist, double u) {
  return std::visit([u](const auto& d) { return d.quantile(u); }, dist);
}

double support_min(const Distribution& dist) {
  return std::visit(overloaded{[](const EmpiricalDist& d) { return d.sample().min(); },
                               [](const PiecewiseLinearDist& d) {
                                 // First knot with mass to its right.
                                 const auto& k = d.knots();
                                 std::size_t i = 0;
                                 while (i + 1 < k.size() && k[i + 1].p == 0.0) ++i;
                                 return k[i].x;
                               }},
                    dist);
}

double support_max(const Distribution& dist) {
  return std::visit(overloaded{[](const EmpiricalDist& d) { return d.sample().max(); },
                               [](const PiecewiseLinearDist& d) {
                                 const auto& k = d.knots();
                                 std::size_t i = k.size() - 1;
                                 while (i > 0 && k[i - 1].p == 1.0) --i;
                                 return k[i].x;
                               }},
                    dist);
}

double mean(const Distribution& dist) {
  return std::visit(overloaded{[](const EmpiricalDist& d) { return d.sample().mean(); },
                               [](const PiecewiseLinearDist& d) { return d.mean(); }},
                    dist);
}

bool is_point_mass(const Distribution& dist) {
  return std::holds_alternative<EmpiricalDist>(dist) && support_min(dist) == support_max(dist);
}

bool is_empirical(const Distribution& dist) { return std::holds_alternative<EmpiricalDist>(dist); }

Distribution affine_image(const Distribution& dist, double sigma, double h) {
  if (!(sigma > 0.0)) throw NonPositiveScale(sigma);
  return std::visit(overloaded{[&](const EmpiricalDist& d) -> Distribution {
                                 std::vector<double> v(d.values().begin(), d.values().end());
                                 for (auto& x : v) x = sigma * x + h;
                                 return EmpiricalDist::from_values(std::move(v));
                               },
                               [&](const PiecewiseLinearDist& d) -> Distribution {
                                 std::vector<Knot> k = d.knots();
                                 for (auto& knot : k) knot.x = sigma * knot.x + h;
                                 return PiecewiseLinearDist(std::move(k));
                               }},
                    dist);
}

std::vector<double> cdf_breakpoints(const Distribution& dist) {
  std::vector<double> xs = std::visit(
      overloaded{[](const EmpiricalDist& d) {
                   return std::vector<double>(d.values().begin(), d.values().end());
                 },
                 [](const PiecewiseLinearDist& d) {
                   std::vector<double> out;
                   for (const auto& k : d.knots()) out.push_back(k.x);
                   return out;
                 }},
      dist);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<QuantilePiece> quantile_pieces(const Distribution& dist) {
  std::vector<QuantilePiece> pieces;
  std::visit(overloaded{[&](const EmpiricalDist& d) {
                          const auto v = d.values();
                          const double n = static_cast<double>(v.size());
                          pieces.reserve(v.size());
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            pieces.push_back({static_cast<double>(i) / n,
                                              static_cast<double>(i + 1) / n, v[i], v[i]});
                          }
                        },
                        [&](const PiecewiseLinearDist& d) {
                          const auto& k = d.knots();
                          for (std::size_t i = 1; i < k.size(); ++i) {
                            if (k[i].p > k[i - 1].p)
                              pieces.push_back({k[i - 1].p, k[i].p, k[i - 1].x, k[i].x});
                          }
                        }},
             dist);
  return pieces;
}

QuantileGrid::QuantileGrid(std::vector<double> breakpoints, std::vector<GridSegment> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  step_ = std::all_of(segments_.begin(), segments_.end(),
                      [](const GridSegment& s) { return s.is_constant(); });
}

namespace {

double interpolate(const QuantilePiece& piece, double u) {
  if (u == piece.u_lo) return piece.q_lo;
  if (u == piece.u_hi) return piece.q_hi;
  if (piece.q_lo == piece.q_hi) return piece.q_lo;
  const double t = (u - piece.u_lo) / (piece.u_hi - piece.u_lo);
  return piece.q_lo + t * (piece.q_hi - piece.q_lo);
}

}  // namespace

QuantileGrid merged_grid(const Distribution& f, const Distribution& g) {
  const auto fp = quantile_pieces(f);
  const auto gp = quantile_pieces(g);

  std::vector<double> breaks;
  breaks.reserve(fp.size() + gp.size() + 1);
  breaks.push_back(0.0);
  for (const auto& p : fp) breaks.push_back(p.u_hi);
  for (const auto& p : gp) breaks.push_back(p.u_hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<GridSegment> segments;
  segments.reserve(breaks.size() - 1);
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    while (fp[i].u_hi <= lo) ++i;
    while (gp[j].u_hi <= lo) ++j;
    segments.push_back({hi - lo, interpolate(fp[i], lo), interpolate(fp[i], hi),
                        interpolate(gp[j], lo), interpolate(gp[j], hi)});
  }
  return QuantileGrid(std::move(breaks), std::move(segments));
}

}  // namespace lsalign
