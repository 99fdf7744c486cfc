#pragma once

#include <istream>
#include <string>
#include <vector>

#include "lsalign/empirical.hpp"

namespace lsalign {

// One value per line, or a single-column CSV. A non-numeric first line is
// taken as a header. Blank lines are skipped. Throws InputError naming the
// source and the 1-based line.
Sample read_sample(std::istream& in, const std::string& source);
Sample read_sample_file(const std::string& path);

struct StudyRow {
  std::string subject;
  std::string treatment;
  std::string visit;
  double value;
};

// CSV with header subject,treatment,visit,value (column order as given in
// the header; extra columns are rejected).
struct PairedStudyTable {
  std::vector<StudyRow> rows;

  // Distinct labels in order of first appearance.
  std::vector<std::string> treatments() const;
  std::vector<std::string> visits() const;
  std::vector<std::string> subjects() const;
  // Values for one cell; empty if the combination is absent.
  std::vector<double> values(const std::string& subject, const std::string& treatment,
                             const std::string& visit) const;
};

PairedStudyTable read_study(std::istream& in, const std::string& source);
PairedStudyTable read_study_file(const std::string& path);

// Splits one CSV record; handles double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace lsalign
