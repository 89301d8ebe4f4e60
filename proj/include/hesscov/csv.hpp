#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hesscov/types.hpp"

namespace hesscov {

/// Floating-point formatting used in every CSV artifact: 17 significant
/// digits, enough to round-trip a double exactly.
inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

/// Time series with one output column (the data files of the experiments).
struct TimeSeries {
  Vector time;
  Vector value;
};

inline void write_time_series_csv(const std::string& path, const TimeSeries& series,
                                  const std::string& value_name = "y") {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "time," << value_name << "\n";
  for (Index k = 0; k < series.time.size(); ++k) {
    out << format_double(series.time(k)) << "," << format_double(series.value(k)) << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

/// Reads a two-column time,y CSV. Parse failures name the offending line.
inline TimeSeries read_time_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file: " + path);
  std::vector<double> times, values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("time", 0) == 0) continue;  // header
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'time,value', got '" +
                       line + "'");
    }
    try {
      std::size_t pos = 0;
      const std::string t_str = line.substr(0, comma);
      const std::string v_str = line.substr(comma + 1);
      const double t = std::stod(t_str, &pos);
      if (pos != t_str.size()) throw std::invalid_argument(t_str);
      pos = 0;
      const double v = std::stod(v_str, &pos);
      if (pos != v_str.size()) throw std::invalid_argument(v_str);
      times.push_back(t);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed number in '" + line +
                       "'");
    }
  }
  TimeSeries series;
  series.time = Eigen::Map<const Vector>(times.data(), static_cast<Index>(times.size()));
  series.value = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  return series;
}

/// Generic CSV table writer: header plus rows of preformatted cells.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << header[c] << (c + 1 < header.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << (c + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace hesscov
