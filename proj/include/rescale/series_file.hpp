#pragma once

// Series files: CSV with a leading "# key: value" metadata block and an
// N,value,sigma table, or the equivalent JSON object. The format is chosen by
// file extension only.
//
//   # base: 6
//   # ratio: 2
//   # per_copy: true
//   # units: ebits
//   N,value,sigma
//   6,0.167,0.001

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rescale/error.hpp"
#include "rescale/types.hpp"

namespace rescale {

struct SeriesRecord {
  CopyCount n = 0;
  double value = 0.0;
  double sigma = 0.0;
};

struct SeriesFile {
  CopyCount base = 1;
  CopyCount ratio = 2;
  bool per_copy = false;
  std::string units = "ebits";
  std::vector<SeriesRecord> records;

  /// Totals on the declared lattice; per-copy records are multiplied by N.
  ResourceSeries to_series() const {
    CopyLattice lattice(base, ratio);
    ResourceSeries::Points points;
    for (const auto& r : records) {
      UncertainValue v(r.value, r.sigma);
      if (per_copy) v = total_from_per_copy(v, r.n);
      if (!points.emplace(r.n, v).second) {
        throw Error(ErrorKind::ParseError, "duplicate record for N=" + std::to_string(r.n));
      }
    }
    return {lattice, std::move(points)};
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
T parse_number(std::string_view text, const std::string& where) {
  text = trim(text);
  T out{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::ParseError, where + ": cannot parse number '" + std::string(text) + "'");
  }
  return out;
}

inline bool parse_bool(std::string_view text, const std::string& where) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorKind::ParseError, where + ": expected true/false, got '" + std::string(text) + "'");
}

inline void check_records(const SeriesFile& file) {
  if (file.base == 0 || file.ratio < 2) {
    throw Error(ErrorKind::ParseError, "metadata needs base >= 1 and ratio >= 2");
  }
  const CopyLattice lattice(file.base, file.ratio);
  for (const auto& r : file.records) {
    if (!lattice.contains(r.n)) {
      throw Error(ErrorKind::NotOnLattice, "record N=" + std::to_string(r.n) +
                                               " is not on the declared lattice");
    }
    if (r.sigma < 0.0) {
      throw Error(ErrorKind::ParseError, "record N=" + std::to_string(r.n) + " has negative sigma");
    }
  }
}

}  // namespace detail

inline SeriesFile parse_series_csv(std::string_view text) {
  SeriesFile file;
  bool have_header = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) throw Error(ErrorKind::ParseError, where + ": metadata after the table header");
      const auto body = detail::trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;  // free-form comment
      const auto key = detail::trim(body.substr(0, colon));
      const auto value = detail::trim(body.substr(colon + 1));
      if (key == "base") file.base = detail::parse_number<CopyCount>(value, where);
      else if (key == "ratio") file.ratio = detail::parse_number<CopyCount>(value, where);
      else if (key == "per_copy") file.per_copy = detail::parse_bool(value, where);
      else if (key == "units") file.units = std::string(value);
      continue;
    }
    if (!have_header) {
      if (line != "N,value,sigma") {
        throw Error(ErrorKind::ParseError, where + ": expected header 'N,value,sigma'");
      }
      have_header = true;
      continue;
    }
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string_view::npos; start = pos + 1) {
      cols.push_back(line.substr(start, pos - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() != 3) throw Error(ErrorKind::ParseError, where + ": expected 3 columns");
    file.records.push_back({detail::parse_number<CopyCount>(cols[0], where),
                            detail::parse_number<double>(cols[1], where),
                            detail::parse_number<double>(cols[2], where)});
  }
  if (!have_header) throw Error(ErrorKind::ParseError, "missing 'N,value,sigma' header");
  detail::check_records(file);
  return file;
}

inline SeriesFile parse_series_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  SeriesFile file;
  try {
    file.base = j.at("base").get<CopyCount>();
    file.ratio = j.at("ratio").get<CopyCount>();
    file.per_copy = j.value("per_copy", false);
    file.units = j.value("units", std::string("ebits"));
    for (const auto& r : j.at("records")) {
      file.records.push_back(
          {r.at("N").get<CopyCount>(), r.at("value").get<double>(), r.at("sigma").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  detail::check_records(file);
  return file;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Dispatches on extension: .csv or .json.
inline SeriesFile parse_series(const std::filesystem::path& path, std::string_view text) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return parse_series_csv(text);
  if (ext == ".json") return parse_series_json(text);
  throw Error(ErrorKind::ParseError, "unsupported extension '" + ext + "' (use .csv or .json)");
}

inline SeriesFile load_series(const std::filesystem::path& path) {
  return parse_series(path, read_file(path));
}

}  // namespace rescale
