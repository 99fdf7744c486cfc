#include "lsalign/inference.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "lsalign/error.hpp"
#include "lsalign/format.hpp"

namespace lsalign {

std::vector<double> signed_rank_ranks(std::span<const double> diffs) {
  std::vector<double> magnitudes;
  for (double d : diffs)
    if (d != 0.0) magnitudes.push_back(std::abs(d));
  std::vector<std::size_t> order(magnitudes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });
  std::vector<double> ranks(magnitudes.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && magnitudes[order[j]] == magnitudes[order[i]]) ++j;
    // positions i..j-1 share ranks i+1..j
    const double average = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = average;
    i = j;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs) {
  std::vector<double> nonzero;
  for (double d : diffs) {
    if (!std::isfinite(d)) throw InvalidParameter("non-finite paired difference");
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) throw AllZeroDifferences();

  const auto ranks = signed_rank_ranks(nonzero);
  const std::size_t n = nonzero.size();
  WilcoxonResult result;
  result.n_effective = n;
  for (std::size_t i = 0; i < n; ++i)
    if (nonzero[i] > 0.0) result.statistic += ranks[i];

  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1.0) / 4.0;

  if (n <= kExactWilcoxonLimit) {
    // Doubled ranks are integers even with ties; count sign patterns per sum.
    std::vector<long long> doubled(n);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = std::llround(2.0 * ranks[i]);
      total += doubled[i];
    }
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    long long reach = 0;
    for (long long r : doubled) {
      for (long long s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
      reach += r;
    }
    const long long observed = std::llround(2.0 * result.statistic);
    // |2W - total/2 * 2| compared in doubled units: mean2 = total / 2.
    const long long dev = std::llabs(2 * observed - total);
    double extreme = 0.0;
    for (long long s = 0; s <= total; ++s)
      if (std::llabs(2 * s - total) >= dev) extreme += counts[static_cast<std::size_t>(s)];
    result.p_value = std::min(1.0, std::ldexp(extreme, -static_cast<int>(n)));
    result.method = WilcoxonResult::Method::Exact;
    return result;
  }

  double tie_term = 0.0;
  {
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  const double variance = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
  const double z = std::max(0.0, std::abs(result.statistic - mean) - 0.5) / std::sqrt(variance);
  const double p = std::erfc(z / std::sqrt(2.0));
  result.p_value = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
  result.method = WilcoxonResult::Method::NormalApproximation;
  return result;
}

void PairedShifts::validate() const {
  if (subject_ids.size() != shift_c.size() || shift_c.size() != shift_f.size())
    throw InvalidParameter("paired shifts have mismatched lengths");
  if (subject_ids.empty()) throw InvalidParameter("paired shifts are empty");
  std::set<std::string> seen(subject_ids.begin(), subject_ids.end());
  if (seen.size() != subject_ids.size()) throw InvalidParameter("duplicate subject identifier");
}

std::string method_label(const Metric& metric) {
  if (metric.is_ks()) return "K-S";
  if (metric.r == 1.0) return "M-D";
  return "M-D(r=" + format_number(metric.r) + ")";
}

TreatmentComparisonRow paired_treatment_compare(const PairedShifts& shifts) {
  shifts.validate();
  const std::size_t n = shifts.subject_ids.size();
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = shifts.shift_c[i] - shifts.shift_f[i];

  TreatmentComparisonRow row;
  row.method = method_label(shifts.metric);
  row.n = n;
  const double dn = static_cast<double>(n);
  row.mean_c = std::accumulate(shifts.shift_c.begin(), shifts.shift_c.end(), 0.0) / dn;
  row.mean_f = std::accumulate(shifts.shift_f.begin(), shifts.shift_f.end(), 0.0) / dn;
  row.mean_diff = row.mean_c - row.mean_f;
  if (n > 1) {
    const double diff_mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / dn;
    double ss = 0.0;
    for (double d : diffs) ss += (d - diff_mean) * (d - diff_mean);
    row.variance_of_diff = ss / (dn - 1.0);
  } else {
    row.variance_of_diff = std::numeric_limits<double>::quiet_NaN();
  }
  row.test = wilcoxon_signed_rank(diffs);
  row.p_value = row.test.p_value;
  return row;
}

namespace {

std::vector<std::string> header(const TreatmentComparisonReport& report) {
  return {"Method",
          "n",
          "Mean." + report.label_c,
          "Mean." + report.label_f,
          "Mean.(" + report.label_c + "-" + report.label_f + ")",
          "variance.of.diff",
          "p-value"};
}

std::vector<std::string> cells(const TreatmentComparisonRow& row) {
  return {row.method,
          std::to_string(row.n),
          format_number(row.mean_c),
          format_number(row.mean_f),
          format_number(row.mean_diff),
          format_number(row.variance_of_diff),
          format_number(row.p_value)};
}

}  // namespace

void write_report_csv(std::ostream& out, const TreatmentComparisonReport& report) {
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  emit(header(report));
  for (const auto& row : report.rows) emit(cells(row));
}

void write_report_table(std::ostream& out, const TreatmentComparisonReport& report) {
  std::vector<std::vector<std::string>> lines{header(report)};
  for (const auto& row : report.rows) lines.push_back(cells(row));
  std::vector<std::size_t> width(lines.front().size(), 0);
  for (const auto& line : lines)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      if (i + 1 < line.size())
        out << std::left << std::setw(static_cast<int>(width[i])) << line[i];
      else
        out << line[i];
    }
    out << '\n';
  }
}

}  // namespace lsalign
