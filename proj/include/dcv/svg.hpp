#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dcv/contour.hpp"

namespace dcv {
namespace detail {

// Locale-independent fixed formatting keeps output bytes deterministic.
inline std::string fmt6(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

// Boundary edges chained into loops, each starting at its smallest vertex.
inline std::vector<std::vector<VertexId>> boundary_loops(const TriangulatedSurface& surface) {
  std::vector<std::vector<EdgeId>> at_vertex(surface.vertex_count());
  std::vector<char> used;
  std::vector<EdgeId> boundary;
  for (EdgeId e = 0; e < surface.edge_count(); ++e) {
    if (!surface.is_boundary_edge(e)) continue;
    boundary.push_back(e);
    for (VertexId v : surface.edge_vertices(e)) at_vertex[v].push_back(e);
  }
  used.assign(surface.edge_count(), 0);

  std::vector<std::vector<VertexId>> loops;
  for (EdgeId start : boundary) {
    if (used[start]) continue;
    std::vector<VertexId> loop;
    VertexId v = std::min(surface.edge_vertices(start)[0], surface.edge_vertices(start)[1]);
    EdgeId e = start;
    while (!used[e]) {
      used[e] = 1;
      loop.push_back(v);
      const auto& ev = surface.edge_vertices(e);
      v = ev[0] == v ? ev[1] : ev[0];
      EdgeId next = kNoEdge;
      for (EdgeId cand : at_vertex[v])
        if (!used[cand]) {
          next = cand;
          break;
        }
      if (next == kNoEdge) break;
      e = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace detail

/// Renders contours over the mesh outline as a standalone SVG. The vertical
/// axis is flipped (SVG y grows downward), the viewBox fits all coordinates
/// with a 5% margin, and numbers are written with fixed six-decimal
/// formatting, so identical inputs produce identical bytes.
inline std::string render_svg(const EmbeddedMesh& mesh, const ContourSet& contours) {
  double minx = 0.0, maxx = 1.0, miny = 0.0, maxy = 1.0;
  if (!mesh.positions.empty()) {
    minx = maxx = mesh.positions[0][0];
    miny = maxy = -mesh.positions[0][1];
    for (const auto& p : mesh.positions) {
      minx = std::fmin(minx, p[0]);
      maxx = std::fmax(maxx, p[0]);
      miny = std::fmin(miny, -p[1]);
      maxy = std::fmax(maxy, -p[1]);
    }
  }
  const double margin = 0.05 * std::fmax(maxx - minx, maxy - miny);
  const double width = (maxx - minx) + 2.0 * margin;
  const double height = (maxy - miny) + 2.0 * margin;
  const double stroke = 0.004 * std::fmax(width, height);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  svg += detail::fmt6(minx - margin) + " " + detail::fmt6(miny - margin) + " " +
         detail::fmt6(width) + " " + detail::fmt6(height) + "\">\n";

  svg += "  <g fill=\"none\" stroke=\"#b0b0b0\" stroke-width=\"" + detail::fmt6(1.5 * stroke) +
         "\">\n";
  for (const auto& loop : detail::boundary_loops(*mesh.surface)) {
    if (loop.size() < 2) continue;
    svg += "    <path d=\"";
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto& p = mesh.positions[loop[i]];
      svg += (i == 0 ? "M" : " L");
      svg += detail::fmt6(p[0]) + " " + detail::fmt6(-p[1]);
    }
    svg += " Z\"/>\n";
  }
  svg += "  </g>\n";

  svg += "  <g fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"" + detail::fmt6(stroke) +
         "\" stroke-linejoin=\"round\">\n";
  for (const auto& lc : contours) {
    for (const auto& curve : lc.curves) {
      if (curve.points.size() < 2) continue;
      svg += "    <path data-level=\"" + detail::fmt6(lc.level) + "\" d=\"";
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        svg += (i == 0 ? "M" : " L");
        svg += detail::fmt6(curve.points[i][0]) + " " + detail::fmt6(-curve.points[i][1]);
      }
      svg += "\"/>\n";
    }
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

inline void write_svg(const EmbeddedMesh& mesh, const ContourSet& contours,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << render_svg(mesh, contours);
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

}  // namespace dcv
