#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dcv/surface.hpp"

namespace dcv {

/// Triangulated surface together with vertex coordinates and the euclidean
/// edge lengths derived from them.
struct EmbeddedMesh {
  SurfacePtr surface;
  std::vector<std::array<double, 3>> positions;
  std::vector<double> edge_lengths;  // per EdgeId

  /// True when all z coordinates vanish relative to the mesh extent; contour
  /// extraction requires it.
  bool planar() const {
    double extent = 1.0, zmax = 0.0;
    for (const auto& p : positions) {
      extent = std::fmax(extent, std::fmax(std::fabs(p[0]), std::fabs(p[1])));
      zmax = std::fmax(zmax, std::fabs(p[2]));
    }
    return zmax <= 1e-9 * extent;
  }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline double parse_double(std::string_view token, int line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) +
                                                ": bad coordinate \"" + std::string(token) + "\"");
  return value;
}

inline VertexId parse_obj_index(std::string_view token, int line_no) {
  // Face references may carry texture/normal slots (i/t/n); only the vertex
  // index before the first '/' is used.
  auto slash = token.find('/');
  auto head = slash == std::string_view::npos ? token : token.substr(0, slash);
  long value = 0;
  auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
  if (ec != std::errc() || ptr != head.data() + head.size() || value <= 0)
    throw Error(ErrorCode::MalformedRecord,
                "line " + std::to_string(line_no) + ": bad vertex reference \"" +
                    std::string(token) + "\" (1-based positive indices required)");
  return static_cast<VertexId>(value - 1);
}

}  // namespace detail

/// Parses Wavefront OBJ text: `v x y z` and triangular `f i j k` records
/// (1-based indices, optional /texture/normal suffixes). Any other record
/// type is ignored. Indices are range-checked once all vertices are known.
inline EmbeddedMesh parse_obj(std::string_view text) {
  std::vector<std::array<double, 3>> positions;
  std::vector<std::array<VertexId, 3>> faces;
  std::vector<int> face_lines;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto comment = line.find('#');
    if (comment != std::string_view::npos) line = line.substr(0, comment);

    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4)
        throw Error(ErrorCode::MalformedRecord,
                    "line " + std::to_string(line_no) + ": vertex record needs 3 coordinates");
      positions.push_back({detail::parse_double(tokens[1], line_no),
                           detail::parse_double(tokens[2], line_no),
                           detail::parse_double(tokens[3], line_no)});
    } else if (tokens[0] == "f") {
      if (tokens.size() > 4)
        throw Error(ErrorCode::NonTriangleFace,
                    "line " + std::to_string(line_no) + ": face has " +
                        std::to_string(tokens.size() - 1) + " vertices, only triangles are supported");
      if (tokens.size() < 4)
        throw Error(ErrorCode::MalformedRecord,
                    "line " + std::to_string(line_no) + ": face record needs 3 vertex references");
      faces.push_back({detail::parse_obj_index(tokens[1], line_no),
                       detail::parse_obj_index(tokens[2], line_no),
                       detail::parse_obj_index(tokens[3], line_no)});
      face_lines.push_back(line_no);
    }
  }

  auto nv = static_cast<VertexId>(positions.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (VertexId v : faces[i])
      if (v >= nv)
        throw Error(ErrorCode::MalformedRecord,
                    "line " + std::to_string(face_lines[i]) + ": vertex index " +
                        std::to_string(v + 1) + " out of range (file has " + std::to_string(nv) +
                        " vertices)");
  }

  EmbeddedMesh mesh;
  mesh.surface = make_surface(nv, std::move(faces));
  mesh.positions = std::move(positions);
  mesh.edge_lengths.reserve(mesh.surface->edge_count());
  for (const auto& ev : mesh.surface->edges()) {
    const auto& a = mesh.positions[ev[0]];
    const auto& b = mesh.positions[ev[1]];
    mesh.edge_lengths.push_back(
        std::hypot(a[0] - b[0], std::hypot(a[1] - b[1], a[2] - b[2])));
  }
  return mesh;
}

inline EmbeddedMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_obj(buffer.str());
}

}  // namespace dcv
