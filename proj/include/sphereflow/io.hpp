#pragma once

// File formats. Writers are hand-rolled so numeric formatting is fixed at
// 17 significant digits and byte-identical across runs; reading goes
// through nlohmann/json for robust validation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphereflow/curve.hpp"
#include "sphereflow/experiments.hpp"
#include "sphereflow/flow.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct CurveFormatError : std::runtime_error {
  explicit CurveFormatError(const std::string& why)
      : std::runtime_error("malformed curve input: " + why) {}
};

namespace detail {

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

inline std::string curve_to_json(const ClosedSphericalCurve& c) {
  std::string out = "{\"points\":[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3& v = c[i].vec();
    if (i) out += ',';
    out += '[';
    out += detail::fmt17(v.x);
    out += ',';
    out += detail::fmt17(v.y);
    out += ',';
    out += detail::fmt17(v.z);
    out += ']';
  }
  out += "]}\n";
  return out;
}

inline ClosedSphericalCurve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CurveFormatError(e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw CurveFormatError("expected {\"points\": [[x,y,z], ...]}");
  }
  std::vector<SpherePoint> pts;
  for (const auto& row : j["points"]) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number()) {
      throw CurveFormatError("each point must be a 3-array of numbers");
    }
    const Vec3 v{row[0].get<double>(), row[1].get<double>(), row[2].get<double>()};
    const double n = norm(v);
    if (std::abs(n - 1.0) > kUnitTol) {
      throw CurveFormatError("point norm " + std::to_string(n) + " is not unit within 1e-9");
    }
    // renormalize only when needed so already-unit rows round-trip bit-exactly
    pts.push_back(SpherePoint::unchecked(std::abs(n - 1.0) <= 1e-15 ? v : v / n));
  }
  try {
    return ClosedSphericalCurve(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw CurveFormatError(e.what());
  }
}

inline ClosedSphericalCurve read_curve(std::istream& in) {
  std::ostringstream all;
  all << in.rdbuf();
  return curve_from_json(all.str());
}

inline void write_trajectory_jsonl(std::ostream& out, const Trajectory& tr) {
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const DiagnosticsRecord& d = tr.diagnostics[k];
    out << "{\"t\":" << detail::fmt17(tr.times[k]) << ",\"curve\":";
    std::string cj = curve_to_json(tr.curves[k]);
    cj.pop_back();  // trailing newline
    out << cj << ",\"diag\":{\"length\":" << detail::fmt17(d.length)
        << ",\"area_left\":" << detail::fmt17(d.area_left)
        << ",\"max_curv\":" << detail::fmt17(d.max_abs_curvature)
        << ",\"gage_residual\":" << detail::fmt17(d.gage_residual) << "}}\n";
  }
  switch (tr.terminal_status.kind) {
    case TerminalKind::kReachedEnd:
      out << "{\"status\":\"ReachedEnd\"}\n";
      break;
    case TerminalKind::kSingular:
      out << "{\"status\":\"Singular\",\"t\":" << detail::fmt17(tr.terminal_status.time) << "}\n";
      break;
    case TerminalKind::kNonSimple:
      out << "{\"status\":\"NonSimple\",\"t\":" << detail::fmt17(tr.terminal_status.time)
          << "}\n";
      break;
  }
}

inline std::string report_to_json(const ExperimentReport& r) {
  std::string out = "{\"name\":\"" + detail::json_escape(r.name) + "\",\"inputs\":{";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    if (i) out += ',';
    out += '"' + detail::json_escape(r.inputs[i].first) + "\":\"" +
           detail::json_escape(r.inputs[i].second) + '"';
  }
  out += "},\"tolerances\":{";
  for (std::size_t i = 0; i < r.tolerances.size(); ++i) {
    if (i) out += ',';
    out += '"' + detail::json_escape(r.tolerances[i].first) +
           "\":" + detail::fmt17(r.tolerances[i].second);
  }
  out += "},\"rows\":[";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i) out += ',';
    out += '{';
    for (std::size_t k = 0; k < r.rows[i].size(); ++k) {
      if (k) out += ',';
      out += '"' + detail::json_escape(r.rows[i][k].first) +
             "\":" + detail::fmt17(r.rows[i][k].second);
    }
    out += '}';
  }
  out += "],\"pass\":";
  out += r.pass ? "true" : "false";
  out += "}\n";
  return out;
}

// Companion CSV: one line per row, columns in first-appearance order,
// blank cells where a row lacks a column.
inline std::string report_to_csv(const ExperimentReport& r) {
  std::vector<std::string> columns;
  for (const auto& row : r.rows) {
    for (const auto& [k, v] : row) {
      (void)v;
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) {
        columns.push_back(k);
      }
    }
  }
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      if (const auto v = detail::row_value(row, columns[i])) {
        out += detail::fmt17(*v);
      }
    }
    out += '\n';
  }
  return out;
}

inline ExperimentReport report_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentReport r;
  r.name = j.at("name").get<std::string>();
  for (const auto& [k, v] : j.at("inputs").items()) {
    r.inputs.emplace_back(k, v.get<std::string>());
  }
  for (const auto& [k, v] : j.at("tolerances").items()) {
    r.tolerances.emplace_back(k, v.get<double>());
  }
  for (const auto& row : j.at("rows")) {
    ExperimentReport::Row out_row;
    for (const auto& [k, v] : row.items()) {
      out_row.emplace_back(k, v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : v.get<double>());
    }
    r.rows.push_back(std::move(out_row));
  }
  r.pass = j.at("pass").get<bool>();
  return r;
}

}  // namespace sphereflow
