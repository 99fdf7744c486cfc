#include "lsalign/golden_section.hpp"

#include <cmath>

namespace lsalign {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double tol = rel_tol * (1.0 + (hi - lo));
  std::size_t evals = 0;
  auto eval = [&](double x) {
    ++evals;
    return fn(x);
  };

  ScalarMinimum best{lo, eval(lo), 0};
  if (hi > lo) {
    const double f_hi = eval(hi);
    if (f_hi < best.value) best = {hi, f_hi, 0};
  }

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double f_mid = eval(mid);
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, f_mid}}) {
    if (v < best.value) best = {x, v, 0};
  }
  best.evaluations = evals;
  return best;
}

}  // namespace lsalign
