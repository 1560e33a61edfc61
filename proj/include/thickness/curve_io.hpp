#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curve.hpp"
#include "errors.hpp"

namespace nir {

using json = nlohmann::json;

// Curve JSON: {"dim": n, "components": [[[x1, ..., xn], ...], ...]}

inline json curve_to_json(const DiscreteCurve& curve) {
  return json{{"dim", curve.dim()}, {"components", curve.to_nested()}};
}

inline DiscreteCurve curve_from_json(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const auto rings = j.at("components").get<std::vector<std::vector<Vec>>>();
    return build_curve(rings, dim);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("curve JSON: ") + e.what());
  }
}

/// CSV: one vertex per row, a blank row between components; the dimension
/// is the column count. Lines starting with '#' are ignored.
inline DiscreteCurve curve_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rings(1);
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t,") == std::string::npos) {
      if (!rings.back().empty()) rings.emplace_back();
      continue;
    }
    if (line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, "CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      fail(ErrorKind::DimensionMismatch, "CSV line " + std::to_string(lineno) + " has " +
                                             std::to_string(row.size()) + " columns, expected " +
                                             std::to_string(dim));
    rings.back().insert(rings.back().end(), row.begin(), row.end());
  }
  if (rings.back().empty()) rings.pop_back();
  if (rings.empty()) fail(ErrorKind::Parse, "CSV contains no vertices");
  return build_curve_flat(std::move(rings), dim);
}

inline void write_curve_csv(std::ostream& out, const DiscreteCurve& curve) {
  out.precision(17);
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    if (c > 0) out << '\n';
    const Ring& r = curve.ring(c);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto v = r.vertex(i);
      for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
      out << '\n';
    }
  }
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline DiscreteCurve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  if (has_suffix(path, ".csv")) return curve_from_csv(in);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, path + ": " + e.what());
  }
  return curve_from_json(j);
}

inline void write_curve_file(const std::string& path, const DiscreteCurve& curve) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path);
  if (has_suffix(path, ".csv"))
    write_curve_csv(out, curve);
  else
    out << curve_to_json(curve).dump() << '\n';
}

}  // namespace nir
