#pragma once

#include <cstddef>
#include <functional>

namespace lsalign {

struct ScalarMinimum {
  double x;
  double value;
  std::size_t evaluations;
};

// Golden-section search for a convex function on [lo, hi]. Stops once the
// bracket is narrower than rel_tol * (1 + (hi - lo)). Both bracket ends are
// also evaluated so boundary minima are returned exactly.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double rel_tol = 1e-9);

}  // namespace lsalign
