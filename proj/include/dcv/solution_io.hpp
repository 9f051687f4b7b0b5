#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcv/problem_io.hpp"
#include "dcv/vortex.hpp"

namespace dcv {

struct SolutionVertexRow {
  VertexId vertex = 0;
  double u = 0.0;
  double higgs_amplitude = 1.0;
  double theta_source = 0.0;
  std::optional<double> theta_target;    // empty for pinned vertices
  std::optional<double> theta_achieved;  // empty when the start was infeasible
};

struct SolutionEdgeRow {
  VertexId i = 0;
  VertexId j = 0;
  double l_source = 0.0;
  std::optional<double> l_baptista;  // rescaled target length, when available
};

/// Flat, serializable view of a solve: global diagnostics plus per-vertex
/// and per-edge tables. Both the JSON and CSV writers emit rows in id order
/// with 17-significant-digit numbers, so output is deterministic and doubles
/// round-trip exactly.
struct SolutionRecord {
  std::string mode;  // "vortex" | "mapping"
  std::string source_geometry;
  std::string target_geometry;
  std::string status;
  int iterations = 0;
  double final_grad_norm = 0.0;
  std::optional<int> c0, c, vortex_number;  // vortex mode only
  std::vector<SolutionVertexRow> vertices;
  std::vector<SolutionEdgeRow> edges;
};

namespace detail {

inline void fill_rows(SolutionRecord& record, const MappingProblem& problem,
                      const Solution& solution) {
  const auto& source = problem.source();
  const auto& surface = source.surface();
  auto theta_source = cone_angles(source);

  record.source_geometry = to_string(source.geometry());
  record.target_geometry = to_string(problem.target_geometry());
  record.status = to_string(solution.status);
  record.iterations = solution.iterations;
  record.final_grad_norm = solution.final_grad_norm;

  record.vertices.reserve(surface.vertex_count());
  for (VertexId v = 0; v < surface.vertex_count(); ++v) {
    SolutionVertexRow row;
    row.vertex = v;
    row.u = solution.u[v];
    row.higgs_amplitude = std::exp(solution.u[v]);
    row.theta_source = theta_source[v];
    if (!problem.is_pinned(v)) row.theta_target = problem.target_angles()[v];
    if (!solution.achieved_angles.empty()) row.theta_achieved = solution.achieved_angles[v];
    record.vertices.push_back(row);
  }

  record.edges.reserve(surface.edge_count());
  for (EdgeId e = 0; e < surface.edge_count(); ++e) {
    SolutionEdgeRow row;
    row.i = surface.edge_vertices(e)[0];
    row.j = surface.edge_vertices(e)[1];
    row.l_source = source.lengths()[e];
    if (solution.target_metric) row.l_baptista = solution.target_metric->lengths()[e];
    record.edges.push_back(row);
  }
}

}  // namespace detail

inline SolutionRecord make_record(const MappingProblem& problem, const Solution& solution) {
  SolutionRecord record;
  record.mode = "mapping";
  detail::fill_rows(record, problem, solution);
  return record;
}

inline SolutionRecord make_record(const VortexProblem& vp, const VortexSolution& vs) {
  SolutionRecord record;
  record.mode = "vortex";
  record.c0 = vp.spec.constants.c0;
  record.c = vp.spec.constants.c;
  record.vortex_number = vp.total_vortex_number;
  detail::fill_rows(record, vp.problem, vs.solution);
  return record;
}

namespace detail {

// 17 significant digits: enough for exact double round-trips, and
// locale-independent via to_chars.
inline std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

inline std::string fmt17(const std::optional<double>& v) {
  return v ? fmt17(*v) : "null";
}

inline std::string fmt_opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "null";
}

}  // namespace detail

inline std::string to_json(const SolutionRecord& r) {
  std::string s;
  s += "{\n  \"format\": \"dcv-solution\",\n  \"version\": 1,\n";
  s += "  \"global\": {\n";
  s += "    \"mode\": \"" + r.mode + "\",\n";
  s += "    \"source_geometry\": \"" + r.source_geometry + "\",\n";
  s += "    \"target_geometry\": \"" + r.target_geometry + "\",\n";
  s += "    \"status\": \"" + r.status + "\",\n";
  s += "    \"iterations\": " + std::to_string(r.iterations) + ",\n";
  s += "    \"final_grad_norm\": " + detail::fmt17(r.final_grad_norm) + ",\n";
  s += "    \"c0\": " + detail::fmt_opt_int(r.c0) + ",\n";
  s += "    \"c\": " + detail::fmt_opt_int(r.c) + ",\n";
  s += "    \"vortex_number\": " + detail::fmt_opt_int(r.vortex_number) + "\n";
  s += "  },\n  \"vertices\": [\n";
  for (std::size_t i = 0; i < r.vertices.size(); ++i) {
    const auto& v = r.vertices[i];
    s += "    {\"vertex\": " + std::to_string(v.vertex) + ", \"u\": " + detail::fmt17(v.u) +
         ", \"higgs_amplitude\": " + detail::fmt17(v.higgs_amplitude) +
         ", \"theta_source\": " + detail::fmt17(v.theta_source) +
         ", \"theta_target\": " + detail::fmt17(v.theta_target) +
         ", \"theta_achieved\": " + detail::fmt17(v.theta_achieved) + "}";
    s += i + 1 < r.vertices.size() ? ",\n" : "\n";
  }
  s += "  ],\n  \"edges\": [\n";
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const auto& e = r.edges[i];
    s += "    {\"i\": " + std::to_string(e.i) + ", \"j\": " + std::to_string(e.j) +
         ", \"l_source\": " + detail::fmt17(e.l_source) +
         ", \"l_baptista\": " + detail::fmt17(e.l_baptista) + "}";
    s += i + 1 < r.edges.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  return s;
}

inline std::string to_csv(const SolutionRecord& r) {
  std::string s = "vertex,u,higgs_amplitude,theta_source,theta_target,theta_achieved\n";
  for (const auto& v : r.vertices) {
    s += std::to_string(v.vertex) + "," + detail::fmt17(v.u) + "," +
         detail::fmt17(v.higgs_amplitude) + "," + detail::fmt17(v.theta_source) + ",";
    if (v.theta_target) s += detail::fmt17(*v.theta_target);
    s += ",";
    if (v.theta_achieved) s += detail::fmt17(*v.theta_achieved);
    s += "\n";
  }
  return s;
}

/// Reads a solution JSON back into a record. Strict: unknown fields and type
/// mismatches are SchemaErrors, like problem parsing.
inline SolutionRecord parse_solution(const std::string& text) {
  using detail::find;
  using detail::integer_at;
  using detail::number_at;
  using detail::reject_unknown_keys;
  using detail::require;
  using detail::require_object;
  using detail::schema_fail;
  using detail::string_at;
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("$: ") + e.what());
  }
  require_object(root, "$");
  reject_unknown_keys(root, "$", {"format", "version", "global", "vertices", "edges"});
  if (string_at(require(root, "format", "$"), "$.format") != "dcv-solution")
    schema_fail("$.format", "not a solution file");
  if (integer_at(require(root, "version", "$"), "$.version") != 1)
    schema_fail("$.version", "unsupported version");

  auto opt_number = [&](const nlohmann::json& j, const std::string& path) {
    return j.is_null() ? std::optional<double>{} : std::optional<double>{number_at(j, path)};
  };
  auto opt_integer = [&](const nlohmann::json& j, const std::string& path) {
    return j.is_null() ? std::optional<int>{}
                       : std::optional<int>{static_cast<int>(integer_at(j, path))};
  };

  SolutionRecord r;
  const auto& g = require(root, "global", "$");
  require_object(g, "$.global");
  reject_unknown_keys(g, "$.global",
                      {"mode", "source_geometry", "target_geometry", "status", "iterations",
                       "final_grad_norm", "c0", "c", "vortex_number"});
  r.mode = string_at(require(g, "mode", "$.global"), "$.global.mode");
  r.source_geometry = string_at(require(g, "source_geometry", "$.global"), "$.global.source_geometry");
  r.target_geometry = string_at(require(g, "target_geometry", "$.global"), "$.global.target_geometry");
  r.status = string_at(require(g, "status", "$.global"), "$.global.status");
  r.iterations =
      static_cast<int>(integer_at(require(g, "iterations", "$.global"), "$.global.iterations"));
  auto fgn = opt_number(require(g, "final_grad_norm", "$.global"), "$.global.final_grad_norm");
  r.final_grad_norm = fgn ? *fgn : std::numeric_limits<double>::infinity();
  r.c0 = opt_integer(require(g, "c0", "$.global"), "$.global.c0");
  r.c = opt_integer(require(g, "c", "$.global"), "$.global.c");
  r.vortex_number = opt_integer(require(g, "vortex_number", "$.global"), "$.global.vortex_number");

  const auto& verts = require(root, "vertices", "$");
  if (!verts.is_array()) schema_fail("$.vertices", "expected an array");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string path = "$.vertices[" + std::to_string(i) + "]";
    require_object(verts[i], path);
    reject_unknown_keys(verts[i], path, {"vertex", "u", "higgs_amplitude", "theta_source",
                                         "theta_target", "theta_achieved"});
    SolutionVertexRow row;
    row.vertex = static_cast<VertexId>(integer_at(require(verts[i], "vertex", path), path + ".vertex"));
    row.u = number_at(require(verts[i], "u", path), path + ".u");
    row.higgs_amplitude =
        number_at(require(verts[i], "higgs_amplitude", path), path + ".higgs_amplitude");
    row.theta_source = number_at(require(verts[i], "theta_source", path), path + ".theta_source");
    row.theta_target = opt_number(require(verts[i], "theta_target", path), path + ".theta_target");
    row.theta_achieved =
        opt_number(require(verts[i], "theta_achieved", path), path + ".theta_achieved");
    r.vertices.push_back(row);
  }

  const auto& edges = require(root, "edges", "$");
  if (!edges.is_array()) schema_fail("$.edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    require_object(edges[i], path);
    reject_unknown_keys(edges[i], path, {"i", "j", "l_source", "l_baptista"});
    SolutionEdgeRow row;
    row.i = static_cast<VertexId>(integer_at(require(edges[i], "i", path), path + ".i"));
    row.j = static_cast<VertexId>(integer_at(require(edges[i], "j", path), path + ".j"));
    row.l_source = number_at(require(edges[i], "l_source", path), path + ".l_source");
    row.l_baptista = opt_number(require(edges[i], "l_baptista", path), path + ".l_baptista");
    r.edges.push_back(row);
  }
  return r;
}

inline void write_solution(const SolutionRecord& record, const std::filesystem::path& json_path,
                           const std::filesystem::path& csv_path) {
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw Error(ErrorCode::IoFailure, "cannot open " + json_path.string() + " for writing");
  js << to_json(record);
  if (!js) throw Error(ErrorCode::IoFailure, "failed writing " + json_path.string());
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error(ErrorCode::IoFailure, "cannot open " + csv_path.string() + " for writing");
  csv << to_csv(record);
  if (!csv) throw Error(ErrorCode::IoFailure, "failed writing " + csv_path.string());
}

}  // namespace dcv
