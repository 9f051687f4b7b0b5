#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dcv/geometry.hpp"
#include "dcv/surface.hpp"

namespace dcv {

enum class ViolationKind {
  NonFiniteLength,     // length not finite and positive
  SphericalEdgeRange,  // spherical length >= pi
  ChordOverflow,       // rescaled spherical chord >= 1
  TriangleInequality,  // one side >= sum of the others
  SphericalPerimeter,  // spherical perimeter >= 2*pi
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NonFiniteLength: return "non_finite_length";
    case ViolationKind::SphericalEdgeRange: return "spherical_edge_range";
    case ViolationKind::ChordOverflow: return "chord_overflow";
    case ViolationKind::TriangleInequality: return "triangle_inequality";
    case ViolationKind::SphericalPerimeter: return "spherical_perimeter";
  }
  return "unknown";
}

struct MetricViolation {
  ViolationKind kind;
  FaceId face;  // kNoFace for per-edge violations
  EdgeId edge;  // kNoEdge for per-face violations
  double value; // offending length, chord, or perimeter
};

/// Outcome of checking edge lengths against the admissibility conditions of a
/// geometry. Inadmissibility is an expected state (it terminates line-search
/// steps, for instance), so it is returned as data rather than thrown.
struct ValidationReport {
  std::vector<MetricViolation> violations;

  bool admissible() const { return violations.empty(); }

  std::string summary(std::size_t max_items = 8) const {
    if (admissible()) return "admissible";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    std::size_t n = std::min(max_items, violations.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = violations[i];
      os << " [" << to_string(v.kind);
      if (v.face != kNoFace) os << " face " << v.face;
      if (v.edge != kNoEdge) os << " edge " << v.edge;
      os << " value " << v.value << "]";
    }
    if (n < violations.size()) os << " ...";
    return os.str();
  }
};

/// Checks that per-edge lengths are positive and finite, satisfy strict
/// triangle inequalities on every face, and respect the spherical caps
/// (each length < pi, each face perimeter < 2*pi). Reports every violation.
inline ValidationReport validate_lengths(const TriangulatedSurface& surface, Geometry geometry,
                                         std::span<const double> lengths) {
  if (lengths.size() != static_cast<std::size_t>(surface.edge_count()))
    throw Error(ErrorCode::InvalidIndex, "length vector size " + std::to_string(lengths.size()) +
                                             " does not match edge count " +
                                             std::to_string(surface.edge_count()));
  ValidationReport report;
  std::vector<bool> edge_ok(lengths.size(), true);
  for (EdgeId e = 0; e < surface.edge_count(); ++e) {
    double l = lengths[e];
    if (!(l > 0.0) || !std::isfinite(l)) {
      report.violations.push_back({ViolationKind::NonFiniteLength, kNoFace, e, l});
      edge_ok[e] = false;
    } else if (geometry == Geometry::Spherical && l >= std::numbers::pi) {
      report.violations.push_back({ViolationKind::SphericalEdgeRange, kNoFace, e, l});
      edge_ok[e] = false;
    }
  }
  for (FaceId f = 0; f < surface.face_count(); ++f) {
    const auto& fe = surface.face_edges(f);
    if (!(edge_ok[fe[0]] && edge_ok[fe[1]] && edge_ok[fe[2]])) continue;
    const std::array<double, 3> l = {lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]};
    for (int m = 0; m < 3; ++m) {
      if (!(l[m] < l[(m + 1) % 3] + l[(m + 2) % 3]))
        report.violations.push_back({ViolationKind::TriangleInequality, f, fe[m], l[m]});
    }
    if (geometry == Geometry::Spherical) {
      double perimeter = l[0] + l[1] + l[2];
      if (!(perimeter < 2.0 * std::numbers::pi))
        report.violations.push_back({ViolationKind::SphericalPerimeter, f, kNoEdge, perimeter});
    }
  }
  return report;
}

/// Piecewise-geodesic metric on a triangulated surface: one length per edge,
/// every face a nondegenerate triangle of the given constant-curvature
/// geometry. Chord lengths L (= l, sinh(l/2), or sin(l/2)) and their logs
/// lambda = 2 log L are precomputed since the conformal machinery works in
/// those coordinates.
class DiscreteMetric {
 public:
  static DiscreteMetric create(SurfacePtr surface, Geometry geometry,
                               std::vector<double> lengths) {
    auto report = validate_lengths(*surface, geometry, lengths);
    if (!report.admissible())
      throw Error(ErrorCode::InadmissibleMetric, report.summary());
    return DiscreteMetric(std::move(surface), geometry, std::move(lengths));
  }

  const TriangulatedSurface& surface() const { return *surface_; }
  const SurfacePtr& surface_ptr() const { return surface_; }
  Geometry geometry() const { return geometry_; }

  const std::vector<double>& lengths() const { return lengths_; }
  const std::vector<double>& chords() const { return chords_; }
  const std::vector<double>& log_lengths() const { return log_lengths_; }

  /// Lengths of the edges opposite corners 0,1,2 of face f.
  std::array<double, 3> face_lengths(FaceId f) const {
    const auto& fe = surface_->face_edges(f);
    return {lengths_[fe[0]], lengths_[fe[1]], lengths_[fe[2]]};
  }

  std::array<double, 3> face_log_lengths(FaceId f) const {
    const auto& fe = surface_->face_edges(f);
    return {log_lengths_[fe[0]], log_lengths_[fe[1]], log_lengths_[fe[2]]};
  }

 private:
  DiscreteMetric(SurfacePtr surface, Geometry geometry, std::vector<double> lengths)
      : surface_(std::move(surface)), geometry_(geometry), lengths_(std::move(lengths)) {
    chords_.resize(lengths_.size());
    log_lengths_.resize(lengths_.size());
    for (std::size_t e = 0; e < lengths_.size(); ++e) {
      chords_[e] = chord_length(geometry_, lengths_[e]);
      log_lengths_[e] = 2.0 * std::log(chords_[e]);
    }
  }

  SurfacePtr surface_;
  Geometry geometry_;
  std::vector<double> lengths_;
  std::vector<double> chords_;
  std::vector<double> log_lengths_;
};

inline TriangleAngles face_angles(const DiscreteMetric& metric, FaceId f) {
  return triangle_angles(metric.geometry(), metric.face_lengths(f));
}

/// Total corner angle at each vertex.
inline std::vector<double> cone_angles(const DiscreteMetric& metric) {
  const auto& surface = metric.surface();
  std::vector<double> theta(surface.vertex_count(), 0.0);
  for (FaceId f = 0; f < surface.face_count(); ++f) {
    auto angles = triangle_angles(metric.geometry(), metric.face_lengths(f));
    const auto& c = surface.face_vertices(f);
    for (int m = 0; m < 3; ++m) theta[c[m]] += angles.angle[m];
  }
  return theta;
}

/// For closed surfaces: sum_v (2*pi - Theta_v) + C_g * total area - 2*pi*chi.
/// Zero (up to rounding) for every admissible metric.
inline double gauss_bonnet_residual(const DiscreteMetric& metric) {
  const auto& surface = metric.surface();
  if (!surface.closed())
    throw Error(ErrorCode::InvalidIndex, "Gauss-Bonnet residual requires a closed surface");
  double defect = 0.0;
  auto theta = cone_angles(metric);
  for (double th : theta) defect += 2.0 * std::numbers::pi - th;
  double area = 0.0;
  for (FaceId f = 0; f < surface.face_count(); ++f)
    area += triangle_angles(metric.geometry(), metric.face_lengths(f)).area;
  return defect + curvature_constant(metric.geometry()) * area -
         2.0 * std::numbers::pi * surface.euler_characteristic();
}

struct RescaleResult {
  std::optional<DiscreteMetric> metric;  // present iff report.admissible()
  ValidationReport report;
};

/// Conformal rescale: chords transform as L~ = exp((u_i+u_j)/2) * L, then are
/// decoded into lengths of the target geometry. Failures (spherical chord
/// >= 1, broken triangle inequality) are collected, not thrown.
inline RescaleResult rescale(const DiscreteMetric& metric, std::span<const double> u,
                             Geometry target) {
  const auto& surface = metric.surface();
  if (u.size() != static_cast<std::size_t>(surface.vertex_count()))
    throw Error(ErrorCode::InvalidIndex, "scale factor vector size " + std::to_string(u.size()) +
                                             " does not match vertex count " +
                                             std::to_string(surface.vertex_count()));
  RescaleResult out;
  std::vector<double> lengths(surface.edge_count());
  std::vector<bool> edge_ok(surface.edge_count(), true);
  for (EdgeId e = 0; e < surface.edge_count(); ++e) {
    const auto& ev = surface.edge_vertices(e);
    double chord = std::exp(0.5 * (u[ev[0]] + u[ev[1]])) * metric.chords()[e];
    if (!(chord > 0.0) || !std::isfinite(chord)) {
      out.report.violations.push_back({ViolationKind::NonFiniteLength, kNoFace, e, chord});
      edge_ok[e] = false;
      continue;
    }
    if (target == Geometry::Spherical && chord >= 1.0) {
      out.report.violations.push_back({ViolationKind::ChordOverflow, kNoFace, e, chord});
      edge_ok[e] = false;
      continue;
    }
    lengths[e] = inverse_chord(target, chord);
  }
  for (FaceId f = 0; f < surface.face_count(); ++f) {
    const auto& fe = surface.face_edges(f);
    if (!(edge_ok[fe[0]] && edge_ok[fe[1]] && edge_ok[fe[2]])) continue;
    const std::array<double, 3> l = {lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]};
    if (!triangle_admissible(target, l)) {
      for (int m = 0; m < 3; ++m)
        if (!(l[m] < l[(m + 1) % 3] + l[(m + 2) % 3]))
          out.report.violations.push_back({ViolationKind::TriangleInequality, f, fe[m], l[m]});
      if (target == Geometry::Spherical && !(l[0] + l[1] + l[2] < 2.0 * std::numbers::pi))
        out.report.violations.push_back(
            {ViolationKind::SphericalPerimeter, f, kNoEdge, l[0] + l[1] + l[2]});
    }
  }
  if (out.report.admissible())
    out.metric = DiscreteMetric::create(metric.surface_ptr(), target, std::move(lengths));
  return out;
}

}  // namespace dcv
