#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace lsalign {

// 12 significant digits; NaN prints as NA.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace lsalign
