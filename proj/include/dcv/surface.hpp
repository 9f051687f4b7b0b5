#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcv/errors.hpp"

namespace dcv {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using FaceId = std::int32_t;

inline constexpr EdgeId kNoEdge = -1;
inline constexpr FaceId kNoFace = -1;

/// Oriented triangulated surface, possibly with boundary. Immutable after
/// construction; `build` validates that the face list describes a manifold
/// with consistently oriented faces and disk (or half-disk) vertex links.
///
/// Conventions, fixed for every consumer of this class:
///  - edges are undirected, stored as (min, max) vertex pairs, and numbered
///    in lexicographic order of those pairs;
///  - `face_edges(f)[m]` is the edge opposite corner m of face f;
///  - `edge_faces(e)` lists incident faces in ascending id, second slot
///    kNoFace for boundary edges.
class TriangulatedSurface {
 public:
  static TriangulatedSurface build(VertexId vertex_count,
                                   std::vector<std::array<VertexId, 3>> faces) {
    TriangulatedSurface s;
    s.vertex_count_ = vertex_count;
    s.faces_ = std::move(faces);
    if (vertex_count < 0) throw Error(ErrorCode::InvalidIndex, "negative vertex count");

    for (FaceId f = 0; f < s.face_count(); ++f) {
      const auto& c = s.faces_[f];
      for (VertexId v : c) {
        if (v < 0 || v >= vertex_count)
          throw Error(ErrorCode::InvalidIndex,
                      "face " + std::to_string(f) + " references vertex " + std::to_string(v));
      }
      if (c[0] == c[1] || c[1] == c[2] || c[2] == c[0])
        throw Error(ErrorCode::DegenerateFace,
                    "face " + std::to_string(f) + " has a repeated vertex");
    }

    s.index_edges();
    s.check_links();
    s.collect_boundary();
    return s;
  }

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  FaceId face_count() const { return static_cast<FaceId>(faces_.size()); }

  const std::vector<std::array<VertexId, 3>>& faces() const { return faces_; }
  const std::vector<std::array<VertexId, 2>>& edges() const { return edges_; }

  const std::array<VertexId, 3>& face_vertices(FaceId f) const { return faces_.at(f); }
  const std::array<EdgeId, 3>& face_edges(FaceId f) const { return face_edges_.at(f); }
  const std::array<VertexId, 2>& edge_vertices(EdgeId e) const { return edges_.at(e); }
  const std::array<FaceId, 2>& edge_faces(EdgeId e) const { return edge_faces_.at(e); }

  /// Edge between two vertices, or kNoEdge if they are not adjacent.
  EdgeId edge_between(VertexId a, VertexId b) const {
    if (a < 0 || a >= vertex_count_ || b < 0 || b >= vertex_count_)
      throw Error(ErrorCode::InvalidIndex, "vertex id out of range");
    auto it = edge_lookup_.find(edge_key(std::min(a, b), std::max(a, b)));
    return it == edge_lookup_.end() ? kNoEdge : it->second;
  }

  bool is_boundary_edge(EdgeId e) const { return edge_faces_.at(e)[1] == kNoFace; }
  bool is_boundary_vertex(VertexId v) const { return boundary_vertex_.at(v) != 0; }
  bool closed() const { return boundary_vertices_.empty(); }

  /// Boundary vertices in ascending id order.
  const std::vector<VertexId>& boundary_vertices() const { return boundary_vertices_; }

  const std::vector<FaceId>& incident_faces(VertexId v) const { return incident_faces_.at(v); }

  int euler_characteristic() const {
    return static_cast<int>(vertex_count_) - static_cast<int>(edge_count()) +
           static_cast<int>(face_count());
  }

  /// Faces around v in rotation order, each paired with the corner index of v
  /// in that face. Boundary vertices start at the face whose leading edge at v
  /// is on the boundary; interior vertices start at the smallest incident face
  /// id, making the order deterministic.
  std::vector<std::pair<FaceId, int>> vertex_star(VertexId v) const {
    if (v < 0 || v >= vertex_count_) throw Error(ErrorCode::InvalidIndex, "vertex id out of range");
    std::vector<std::pair<FaceId, int>> star;
    FaceId start = star_start(v);
    FaceId f = start;
    while (f != kNoFace) {
      int corner = corner_of(f, v);
      star.emplace_back(f, corner);
      f = next_in_star(f, v);
      if (f == start) break;
    }
    return star;
  }

 private:
  static std::uint64_t edge_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  int corner_of(FaceId f, VertexId v) const {
    const auto& c = faces_[f];
    for (int i = 0; i < 3; ++i)
      if (c[i] == v) return i;
    throw Error(ErrorCode::InvalidIndex, "vertex not in face");
  }

  // Face following f counterclockwise around v, i.e. the face across the
  // trailing edge {v, b} of f = (v, a, b); kNoFace at the boundary.
  FaceId next_in_star(FaceId f, VertexId v) const {
    int i = corner_of(f, v);
    VertexId b = faces_[f][(i + 2) % 3];
    EdgeId e = edge_between(v, b);
    const auto& ef = edge_faces_[e];
    if (ef[1] == kNoFace) return kNoFace;
    return ef[0] == f ? ef[1] : ef[0];
  }

  // Walk start: for boundary links the unique face whose leading edge {v, a}
  // is unpaired, otherwise the smallest incident face id.
  FaceId star_start(VertexId v) const {
    const auto& inc = incident_faces_[v];
    if (inc.empty()) return kNoFace;
    for (FaceId f : inc) {
      int i = corner_of(f, v);
      VertexId a = faces_[f][(i + 1) % 3];
      if (is_boundary_edge(edge_between(v, a))) return f;
    }
    return inc.front();
  }

  void index_edges() {
    struct EdgeInfo {
      std::vector<FaceId> faces;
      int forward = 0;   // traversals min->max
      int backward = 0;  // traversals max->min
    };
    std::unordered_map<std::uint64_t, EdgeInfo> info;
    info.reserve(faces_.size() * 2);
    for (FaceId f = 0; f < face_count(); ++f) {
      const auto& c = faces_[f];
      for (int m = 0; m < 3; ++m) {
        VertexId p = c[(m + 1) % 3];
        VertexId q = c[(m + 2) % 3];
        auto& ei = info[edge_key(std::min(p, q), std::max(p, q))];
        ei.faces.push_back(f);
        (p < q ? ei.forward : ei.backward) += 1;
      }
    }

    std::vector<std::array<VertexId, 2>> pairs;
    pairs.reserve(info.size());
    for (const auto& [key, ei] : info) {
      auto a = static_cast<VertexId>(key >> 32);
      auto b = static_cast<VertexId>(key & 0xffffffffu);
      if (ei.faces.size() > 2)
        throw Error(ErrorCode::NonManifoldEdge, "edge (" + std::to_string(a) + ", " +
                                                    std::to_string(b) + ") lies in " +
                                                    std::to_string(ei.faces.size()) + " faces");
      if (ei.forward > 1 || ei.backward > 1)
        throw Error(ErrorCode::InconsistentOrientation,
                    "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") is traversed twice in the same direction");
      pairs.push_back({a, b});
    }
    std::sort(pairs.begin(), pairs.end());

    edges_ = std::move(pairs);
    edge_lookup_.reserve(edges_.size());
    edge_faces_.assign(edges_.size(), {kNoFace, kNoFace});
    for (EdgeId e = 0; e < edge_count(); ++e) {
      auto key = edge_key(edges_[e][0], edges_[e][1]);
      edge_lookup_.emplace(key, e);
      auto& fs = info[key].faces;
      std::sort(fs.begin(), fs.end());
      edge_faces_[e][0] = fs[0];
      if (fs.size() == 2) edge_faces_[e][1] = fs[1];
    }

    face_edges_.assign(faces_.size(), {kNoEdge, kNoEdge, kNoEdge});
    for (FaceId f = 0; f < face_count(); ++f) {
      const auto& c = faces_[f];
      for (int m = 0; m < 3; ++m) {
        VertexId p = c[(m + 1) % 3];
        VertexId q = c[(m + 2) % 3];
        face_edges_[f][m] = edge_lookup_.at(edge_key(std::min(p, q), std::max(p, q)));
      }
    }

    incident_faces_.assign(vertex_count_, {});
    for (FaceId f = 0; f < face_count(); ++f)
      for (VertexId v : faces_[f]) incident_faces_[v].push_back(f);
  }

  // Every vertex must lie in at least one face, and its incident faces must
  // form a single fan: a cycle for interior vertices, one open strip between
  // two boundary edges otherwise.
  void check_links() {
    boundary_vertex_.assign(vertex_count_, 0);
    std::vector<int> boundary_edges_at(vertex_count_, 0);
    for (EdgeId e = 0; e < edge_count(); ++e) {
      if (edge_faces_[e][1] == kNoFace) {
        for (VertexId v : edges_[e]) {
          boundary_vertex_[v] = 1;
          boundary_edges_at[v] += 1;
        }
      }
    }

    for (VertexId v = 0; v < vertex_count_; ++v) {
      const auto& inc = incident_faces_[v];
      if (inc.empty())
        throw Error(ErrorCode::IsolatedVertex,
                    "vertex " + std::to_string(v) + " lies in no face");

      std::size_t starts = 0;
      for (FaceId f : inc) {
        int i = corner_of(f, v);
        VertexId a = faces_[f][(i + 1) % 3];
        if (is_boundary_edge(edge_between(v, a))) starts += 1;
      }
      if (boundary_vertex_[v]) {
        if (starts != 1 || boundary_edges_at[v] != 2)
          throw Error(ErrorCode::NonDiskLink,
                      "vertex " + std::to_string(v) + " has a disconnected or pinched link");
      } else if (starts != 0) {
        throw Error(ErrorCode::NonDiskLink,
                    "vertex " + std::to_string(v) + " has a disconnected or pinched link");
      }

      std::size_t visited = 0;
      FaceId start = star_start(v);
      FaceId f = start;
      while (f != kNoFace) {
        visited += 1;
        if (visited > inc.size()) break;
        f = next_in_star(f, v);
        if (f == start) break;
      }
      if (visited != inc.size())
        throw Error(ErrorCode::NonDiskLink,
                    "vertex " + std::to_string(v) + " has a disconnected or pinched link");
    }
  }

  void collect_boundary() {
    boundary_vertices_.clear();
    for (VertexId v = 0; v < vertex_count_; ++v)
      if (boundary_vertex_[v]) boundary_vertices_.push_back(v);
  }

  VertexId vertex_count_ = 0;
  std::vector<std::array<VertexId, 3>> faces_;
  std::vector<std::array<VertexId, 2>> edges_;
  std::vector<std::array<EdgeId, 3>> face_edges_;
  std::vector<std::array<FaceId, 2>> edge_faces_;
  std::unordered_map<std::uint64_t, EdgeId> edge_lookup_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<VertexId> boundary_vertices_;
  std::vector<std::vector<FaceId>> incident_faces_;
};

using SurfacePtr = std::shared_ptr<const TriangulatedSurface>;

inline SurfacePtr make_surface(VertexId vertex_count, std::vector<std::array<VertexId, 3>> faces) {
  return std::make_shared<const TriangulatedSurface>(
      TriangulatedSurface::build(vertex_count, std::move(faces)));
}

}  // namespace dcv
