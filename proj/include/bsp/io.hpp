#ifndef BSP_IO_HPP
#define BSP_IO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bsp/contours.hpp"
#include "bsp/curve.hpp"
#include "bsp/errors.hpp"
#include "bsp/subdivision.hpp"
#include "bsp/surface.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Shortest-exact decimal form of a double (%.17g survives a round trip).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temp file in the same directory, then renames over the
/// target, so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw ParseError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Curve spec JSON: { "degree": n, "knots": [...], "control_points": [[x,y,z]] }

inline nlohmann::json curve_to_json(const BSplineCurve<double>& curve) {
  nlohmann::json j;
  j["degree"] = curve.degree;
  j["knots"] = std::vector<double>(
      curve.knots.values().data(),
      curve.knots.values().data() + curve.knots.size());
  nlohmann::json pts = nlohmann::json::array();
  for (Index i = 0; i < curve.num_control(); ++i)
    pts.push_back({curve.control_points(i, 0), curve.control_points(i, 1),
                   curve.control_points(i, 2)});
  j["control_points"] = std::move(pts);
  return j;
}

inline BSplineCurve<double> curve_from_json(const nlohmann::json& j) {
  try {
    const int degree = j.at("degree").get<int>();
    const std::vector<double> knot_values =
        j.at("knots").get<std::vector<double>>();
    const auto& pts = j.at("control_points");
    if (!pts.is_array() || pts.empty())
      throw ParseError("curve spec: control_points must be a nonempty array");
    PointListd control(static_cast<Index>(pts.size()), 3);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].is_array() || pts[i].size() != 3)
        throw ParseError("curve spec: control point " + std::to_string(i) +
                         " must be [x, y, z]");
      for (int c = 0; c < 3; ++c)
        control(static_cast<Index>(i), c) = pts[i][c].get<double>();
    }
    VecXd kv(static_cast<Index>(knot_values.size()));
    for (std::size_t i = 0; i < knot_values.size(); ++i)
      kv[static_cast<Index>(i)] = knot_values[i];
    return BSplineCurve<double>(degree, KnotVector<double>(std::move(kv)),
                                std::move(control));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Polygon JSON: { "closed": bool, "points": [[x,y,z], ...] }

inline nlohmann::json polygon_to_json(const ControlPolygon<double>& poly) {
  nlohmann::json j;
  j["closed"] = poly.closed;
  nlohmann::json pts = nlohmann::json::array();
  for (Index i = 0; i < poly.points.rows(); ++i)
    pts.push_back({poly.points(i, 0), poly.points(i, 1), poly.points(i, 2)});
  j["points"] = std::move(pts);
  return j;
}

inline ControlPolygon<double> polygon_from_json(const nlohmann::json& j) {
  try {
    ControlPolygon<double> poly;
    poly.closed = j.at("closed").get<bool>();
    const auto& pts = j.at("points");
    if (!pts.is_array() || pts.size() < 2)
      throw ParseError("polygon: points must be an array of >= 2 entries");
    poly.points.resize(static_cast<Index>(pts.size()), 3);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].is_array() || pts[i].size() != 3)
        throw ParseError("polygon: point " + std::to_string(i) +
                         " must be [x, y, z]");
      for (int c = 0; c < 3; ++c)
        poly.points(static_cast<Index>(i), c) = pts[i][c].get<double>();
    }
    return poly;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polygon: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Contour dataset JSON: [ { "id": str, "slice": int, "points": [[x,y],...] } ]

inline nlohmann::json contours_to_json(
    const std::vector<Contour<double>>& contours) {
  nlohmann::json j = nlohmann::json::array();
  for (const Contour<double>& c : contours) {
    nlohmann::json pts = nlohmann::json::array();
    for (Index i = 0; i < c.points.rows(); ++i)
      pts.push_back({c.points(i, 0), c.points(i, 1)});
    j.push_back({{"id", c.id}, {"slice", c.slice}, {"points", std::move(pts)}});
  }
  return j;
}

inline std::vector<Contour<double>> contours_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_array()) throw ParseError("contour dataset: top level must be an array");
    std::vector<Contour<double>> out;
    out.reserve(j.size());
    for (std::size_t e = 0; e < j.size(); ++e) {
      const auto& entry = j[e];
      Contour<double> c;
      c.id = entry.at("id").get<std::string>();
      c.slice = entry.at("slice").get<int>();
      const auto& pts = entry.at("points");
      if (!pts.is_array() || pts.size() < 3)
        throw ParseError("contour " + c.id + ": needs >= 3 points");
      c.points.resize(static_cast<Index>(pts.size()), 2);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].is_array() || pts[i].size() != 2)
          throw ParseError("contour " + c.id + ": point " + std::to_string(i) +
                           " must be [x, y]");
        c.points(static_cast<Index>(i), 0) = pts[i][0].get<double>();
        c.points(static_cast<Index>(i), 1) = pts[i][1].get<double>();
      }
      out.push_back(std::move(c));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("contour dataset: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

inline std::string curve_set_to_csv(const CurveSet<double>& set) {
  std::string out = "ts,x,y,z\n";
  for (Index i = 0; i < set.ts.size(); ++i) {
    out += format_double(set.ts[i]);
    for (int c = 0; c < 3; ++c) {
      out += ',';
      out += format_double(set.points(i, c));
    }
    out += '\n';
  }
  return out;
}

inline std::string points_to_csv(const PointListd& points) {
  std::string out = "x,y,z\n";
  for (Index i = 0; i < points.rows(); ++i) {
    out += format_double(points(i, 0));
    out += ',';
    out += format_double(points(i, 1));
    out += ',';
    out += format_double(points(i, 2));
    out += '\n';
  }
  return out;
}

namespace detail {

inline double parse_csv_double(std::string_view field, std::size_t line_no) {
  double v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError("CSV line " + std::to_string(line_no) +
                     ": bad number '" + std::string(field) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

/// Parsed point CSV: rows of `x,y,z` or `ts,x,y,z`; a header row naming the
/// columns is optional. When a ts column is present it is returned too.
struct PointsCsv {
  PointListd points;
  VecXd ts;  // empty when the file has no ts column
};

inline PointsCsv read_points_csv(const std::string& text) {
  std::vector<std::array<double, 4>> rows;
  bool has_ts = false;
  bool first_content_line = true;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (first_content_line) {
      first_content_line = false;
      if (!fields.empty() && (fields[0] == "ts" || fields[0] == "x")) {
        has_ts = fields[0] == "ts";
        continue;  // header row
      }
      has_ts = fields.size() == 4;
    }
    const std::size_t expect = has_ts ? 4 : 3;
    if (fields.size() != expect)
      throw ParseError("CSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expect) + " fields, got " +
                       std::to_string(fields.size()));
    std::array<double, 4> row{0, 0, 0, 0};
    for (std::size_t f = 0; f < fields.size(); ++f)
      row[f + (has_ts ? 0 : 1)] = detail::parse_csv_double(fields[f], line_no);
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("CSV: no data rows");
  PointsCsv out;
  out.points.resize(static_cast<Index>(rows.size()), 3);
  if (has_ts) out.ts.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (has_ts) out.ts[static_cast<Index>(i)] = rows[i][0];
    out.points(static_cast<Index>(i), 0) = rows[i][1];
    out.points(static_cast<Index>(i), 1) = rows[i][2];
    out.points(static_cast<Index>(i), 2) = rows[i][3];
  }
  return out;
}

// ---------------------------------------------------------------------------
// OBJ export: vertex lines then quad faces, 1-based indices, LF endings.

inline std::string mesh_to_obj(const QuadMesh<double>& mesh) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mesh.vertices.rows()) * 60);
  for (Index i = 0; i < mesh.vertices.rows(); ++i) {
    out += "v ";
    out += format_double(mesh.vertices(i, 0));
    out += ' ';
    out += format_double(mesh.vertices(i, 1));
    out += ' ';
    out += format_double(mesh.vertices(i, 2));
    out += '\n';
  }
  for (Index q = 0; q < mesh.quads.rows(); ++q) {
    out += "f " + std::to_string(mesh.quads(q, 0) + 1) + ' ' +
           std::to_string(mesh.quads(q, 1) + 1) + ' ' +
           std::to_string(mesh.quads(q, 2) + 1) + ' ' +
           std::to_string(mesh.quads(q, 3) + 1) + '\n';
  }
  return out;
}

}  // namespace bsp

#endif  // BSP_IO_HPP
