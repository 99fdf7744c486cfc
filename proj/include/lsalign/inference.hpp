#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lsalign/distance.hpp"

namespace lsalign {

struct WilcoxonResult {
  enum class Method { Exact, NormalApproximation };

  double statistic = 0.0;  // W+, sum of ranks of the positive differences
  std::size_t n_effective = 0;
  double p_value = 1.0;  // two-sided
  Method method = Method::Exact;
};

// Largest number of nonzero differences handled by the exact null
// distribution; larger samples use the tie-corrected normal approximation.
inline constexpr std::size_t kExactWilcoxonLimit = 25;

// Zeros are dropped; tied magnitudes share their average rank. The exact
// two-sided p-value is P(|W+ - mean| >= |w - mean|) under random signs.
// Throws AllZeroDifferences.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs);

// Average ranks of |d| over the nonzero differences, in input order.
std::vector<double> signed_rank_ranks(std::span<const double> diffs);


struct PairedShifts {
  std::vector<std::string> subject_ids;
  std::vector<double> shift_c;
  std::vector<double> shift_f;
  Metric metric;

  // Throws InvalidParameter on length mismatch or duplicate subjects.
  void validate() const;
};

struct TreatmentComparisonRow {
  std::string method;
  std::size_t n = 0;
  double mean_c = 0.0;
  double mean_f = 0.0;
  double mean_diff = 0.0;
  double variance_of_diff = 0.0;  // unbiased; NaN when n == 1
  double p_value = 1.0;
  WilcoxonResult test;
};

struct TreatmentComparisonReport {
  std::string label_c = "C";
  std::string label_f = "F";
  std::vector<TreatmentComparisonRow> rows;
};

TreatmentComparisonRow paired_treatment_compare(const PairedShifts& shifts);

// "M-D" for Mallows, "K-S" for KS (with the order appended when r != 1).
std::string method_label(const Metric& metric);

void write_report_csv(std::ostream& out, const TreatmentComparisonReport& report);
void write_report_table(std::ostream& out, const TreatmentComparisonReport& report);

}  // namespace lsalign
