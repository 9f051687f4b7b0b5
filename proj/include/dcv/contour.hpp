#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "dcv/obj_io.hpp"

namespace dcv {

struct Contour {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
};

struct LevelContours {
  double level = 0.0;
  std::vector<Contour> curves;
};

using ContourSet = std::vector<LevelContours>;

/// count values strictly between min and max of the field, equidistant.
/// A constant field has no interior values, so the result is empty.
inline std::vector<double> default_levels(std::span<const double> field, int count) {
  if (count <= 0 || field.empty()) return {};
  double lo = field[0], hi = field[0];
  for (double v : field) {
    lo = std::fmin(lo, v);
    hi = std::fmax(hi, v);
  }
  if (!(hi > lo)) return {};
  std::vector<double> levels;
  levels.reserve(count);
  for (int i = 1; i <= count; ++i)
    levels.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count + 1));
  return levels;
}

/// Marching triangles on a planar mesh. An edge (a, b) crosses a level c
/// when (f_a < c) differs from (f_b < c); the crossing point is the linear
/// interpolation along the edge. A triangle has an even number of crossed
/// edges, so each crossed triangle contributes one segment. Segments are
/// chained by shared crossing identity (same edge, same level), which makes
/// shared endpoints bit-identical: well inside the 1e-12 chaining tolerance.
/// Open chains start at the smallest-id dangling edge, then remaining cycles
/// at their smallest edge, so output order is deterministic.
inline ContourSet extract_contours(const EmbeddedMesh& mesh, std::span<const double> field,
                                   std::span<const double> levels) {
  const auto& surface = *mesh.surface;
  if (field.size() != static_cast<std::size_t>(surface.vertex_count()))
    throw Error(ErrorCode::InvalidIndex, "field size does not match vertex count");
  for (double v : field)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidIndex, "field values must be finite");
  if (!mesh.planar())
    throw Error(ErrorCode::NonPlanarMesh, "contour extraction requires z = 0 coordinates");

  ContourSet out;
  out.reserve(levels.size());

  for (double level : levels) {
    LevelContours lc{level, {}};

    std::vector<char> crossed(surface.edge_count(), 0);
    std::vector<std::array<double, 2>> point(surface.edge_count());
    for (EdgeId e = 0; e < surface.edge_count(); ++e) {
      const auto& ev = surface.edge_vertices(e);
      double fa = field[ev[0]], fb = field[ev[1]];
      if ((fa < level) == (fb < level)) continue;
      crossed[e] = 1;
      double t = (level - fa) / (fb - fa);
      const auto& pa = mesh.positions[ev[0]];
      const auto& pb = mesh.positions[ev[1]];
      point[e] = {pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])};
    }

    // neighbors[e]: the crossed edges sharing a segment with e (at most two,
    // one per incident face).
    std::map<EdgeId, std::vector<EdgeId>> neighbors;
    for (FaceId f = 0; f < surface.face_count(); ++f) {
      const auto& fe = surface.face_edges(f);
      std::array<EdgeId, 3> hit{};
      int count = 0;
      for (EdgeId e : fe)
        if (crossed[e]) hit[count++] = e;
      // The crossing test is a parity argument around the triangle: exactly
      // zero or two of its edges can be crossed.
      if (count != 2) continue;
      neighbors[hit[0]].push_back(hit[1]);
      neighbors[hit[1]].push_back(hit[0]);
    }

    std::map<EdgeId, bool> used;
    for (const auto& [e, nb] : neighbors) used[e] = false;

    auto walk = [&](EdgeId start, bool closed) {
      Contour c;
      c.closed = closed;
      EdgeId prev = kNoEdge;
      EdgeId cur = start;
      while (cur != kNoEdge && !used[cur]) {
        used[cur] = true;
        c.points.push_back(point[cur]);
        EdgeId next = kNoEdge;
        for (EdgeId n : neighbors[cur])
          if (n != prev && !used[n]) {
            next = n;
            break;
          }
        prev = cur;
        cur = next;
      }
      if (closed && c.points.size() >= 2) c.points.push_back(c.points.front());
      return c;
    };

    for (const auto& [e, nb] : neighbors)
      if (nb.size() == 1 && !used[e]) lc.curves.push_back(walk(e, false));
    for (const auto& [e, nb] : neighbors)
      if (!used[e]) lc.curves.push_back(walk(e, true));

    out.push_back(std::move(lc));
  }
  return out;
}

}  // namespace dcv
