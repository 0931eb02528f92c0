#ifndef SANDFRAC_CSV_IO_HPP
#define SANDFRAC_CSV_IO_HPP

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sandfrac/anfis_train.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/metrics.hpp"

namespace sandfrac {

/// 17 significant digits; "nan" for NaN.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Comma-separated table with a mandatory header line. Blank lines are
/// skipped; quoting is not supported.
inline CsvTable parse_csv(std::istream& in, const std::string& source = "csv") {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_fields(line);
    if (t.header.empty()) {
      if (lineno == 1 && fields.front().size() >= 3 &&
          fields.front().compare(0, 3, "\xEF\xBB\xBF") == 0)
        fields.front().erase(0, 3);
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw InputError(source + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (t.header.empty()) throw InputError(source + ": missing header line");
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

inline double parse_real(const std::string& s, const std::string& where) {
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw InputError(where + ": cannot parse number '" + s + "'");
  return v;
}

inline long parse_integer(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw InputError(where + ": cannot parse integer '" + s + "'");
  return v;
}

inline constexpr const char* kWellColumn = "well_id";
inline constexpr const char* kTimeColumn = "time_ms";
inline constexpr const char* kTargetColumn = "sand_fraction";

/// Dataset from a table with columns well_id (optional), time_ms
/// (optional), sand_fraction (required); every other column is a
/// predictor attribute, in file order.
inline Dataset dataset_from_table(const CsvTable& t, const std::string& source = "dataset") {
  const auto well = t.column(kWellColumn);
  const auto time = t.column(kTimeColumn);
  const auto target = t.column(kTargetColumn);
  if (!target) throw InputError(source + ": missing required column '" + std::string(kTargetColumn) + "'");
  Dataset d;
  std::vector<std::size_t> attr_cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == target || c == well || c == time) continue;
    d.attribute_names.push_back(t.header[c]);
    attr_cols.push_back(c);
  }
  d.samples.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = source + ":" + std::to_string(t.line_numbers[r]);
    Sample s;
    if (well) s.well_id = row[*well];
    if (time && !row[*time].empty()) s.time_ms = parse_real(row[*time], where);
    s.target = parse_real(row[*target], where);
    s.predictors.reserve(attr_cols.size());
    for (auto c : attr_cols) s.predictors.push_back(parse_real(row[c], where));
    d.samples.push_back(std::move(s));
  }
  d.validate();
  return d;
}

inline Dataset read_dataset(const std::string& path) { return dataset_from_table(read_csv(path), path); }

inline void write_dataset(std::ostream& out, const Dataset& d) {
  out << kWellColumn << ',' << kTimeColumn;
  for (const auto& a : d.attribute_names) out << ',' << a;
  out << ',' << kTargetColumn << '\n';
  for (const auto& s : d.samples) {
    out << s.well_id << ',' << (s.time_ms ? format_real(*s.time_ms) : std::string{});
    for (double v : s.predictors) out << ',' << format_real(v);
    out << ',' << format_real(s.target) << '\n';
  }
}

inline void write_dataset(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_dataset(out, d);
}

struct WellLocation {
  std::string well_id;
  std::size_t inline_index = 0;
  std::size_t crossline_index = 0;
};

inline std::vector<WellLocation> read_locations(const std::string& path) {
  const auto t = read_csv(path);
  const auto w = t.column(kWellColumn), il = t.column("inline"), xl = t.column("crossline");
  if (!w || !il || !xl) throw InputError(path + ": locations need columns well_id,inline,crossline");
  std::vector<WellLocation> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
    const long i = parse_integer(t.rows[r][*il], where);
    const long x = parse_integer(t.rows[r][*xl], where);
    if (i < 0 || x < 0) throw InputError(where + ": negative trace index");
    out.push_back({t.rows[r][*w], static_cast<std::size_t>(i), static_cast<std::size_t>(x)});
  }
  return out;
}

inline void write_locations(const std::string& path, const std::vector<WellLocation>& locs) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << "well_id,inline,crossline\n";
  for (const auto& l : locs) out << l.well_id << ',' << l.inline_index << ',' << l.crossline_index << '\n';
}

inline void write_report_csv(std::ostream& out, const TrainReport& report) {
  out << "epoch,train_rmse,test_rmse\n";
  for (const auto& e : report.epochs)
    out << e.epoch << ',' << format_real(e.train_rmse) << ',' << format_real(e.test_rmse) << '\n';
}

inline void write_report_csv(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_report_csv(out, report);
}

}  // namespace sandfrac

#endif  // SANDFRAC_CSV_IO_HPP
