#include "lsalign/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "lsalign/error.hpp"

namespace lsalign {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

void add_unique(std::vector<std::string>& list, const std::string& v) {
  if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

Sample read_sample(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 1) throw InputError(source, line_no, "expected a single column");
    const auto value = parse_number(fields[0]);
    if (!value) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError(source, line_no, "not a number: '" + fields[0] + "'");
    }
    first = false;
    if (!std::isfinite(*value)) throw InputError(source, line_no, "non-finite value");
    values.push_back(*value);
  }
  if (in.bad()) throw InputError(source, 0, "read failure");
  if (values.empty()) throw InputError(source, 0, "no numeric values");
  return Sample::from_values(std::move(values));
}

Sample read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, 0, "cannot open file");
  return read_sample(in, path);
}

std::vector<std::string> PairedStudyTable::treatments() const {
  std::vector<std::string> out;
  for (const auto& r : rows) add_unique(out, r.treatment);
  return out;
}

std::vector<std::string> PairedStudyTable::visits() const {
  std::vector<std::string> out;
  for (const auto& r : rows) add_unique(out, r.visit);
  return out;
}

std::vector<std::string> PairedStudyTable::subjects() const {
  std::vector<std::string> out;
  for (const auto& r : rows) add_unique(out, r.subject);
  return out;
}

std::vector<double> PairedStudyTable::values(const std::string& subject,
                                             const std::string& treatment,
                                             const std::string& visit) const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.subject == subject && r.treatment == treatment && r.visit == visit) out.push_back(r.value);
  return out;
}

PairedStudyTable read_study(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_csv_line(line);
  }
  if (header.empty()) throw InputError(source, 0, "empty study file");

  const std::vector<std::string> required{"subject", "treatment", "visit", "value"};
  if (header.size() != required.size())
    throw InputError(source, line_no, "header must be subject,treatment,visit,value");
  std::vector<std::size_t> column(required.size());
  for (std::size_t k = 0; k < required.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), required[k]);
    if (it == header.end()) throw InputError(source, line_no, "missing column '" + required[k] + "'");
    column[k] = static_cast<std::size_t>(it - header.begin());
  }

  PairedStudyTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw InputError(source, line_no, "expected " + std::to_string(header.size()) + " fields");
    StudyRow row{fields[column[0]], fields[column[1]], fields[column[2]], 0.0};
    if (row.subject.empty() || row.treatment.empty() || row.visit.empty())
      throw InputError(source, line_no, "empty identifier");
    const auto value = parse_number(fields[column[3]]);
    if (!value) throw InputError(source, line_no, "not a number: '" + fields[column[3]] + "'");
    if (!std::isfinite(*value)) throw InputError(source, line_no, "non-finite value");
    row.value = *value;
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InputError(source, 0, "no data rows");
  return table;
}

PairedStudyTable read_study_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, 0, "cannot open file");
  return read_study(in, path);
}

}  // namespace lsalign
