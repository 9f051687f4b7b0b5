#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dcv/errors.hpp"

namespace dcv {

enum class Geometry { Euclidean, Hyperbolic, Spherical };

/// Sign of the constant curvature: 0, -1, +1.
inline constexpr int curvature_constant(Geometry g) {
  switch (g) {
    case Geometry::Euclidean: return 0;
    case Geometry::Hyperbolic: return -1;
    case Geometry::Spherical: return +1;
  }
  return 0;
}

inline const char* to_string(Geometry g) {
  switch (g) {
    case Geometry::Euclidean: return "euclidean";
    case Geometry::Hyperbolic: return "hyperbolic";
    case Geometry::Spherical: return "spherical";
  }
  return "euclidean";
}

inline Geometry geometry_from_string(const std::string& name) {
  if (name == "euclidean") return Geometry::Euclidean;
  if (name == "hyperbolic") return Geometry::Hyperbolic;
  if (name == "spherical") return Geometry::Spherical;
  throw Error(ErrorCode::SchemaError, "unknown geometry \"" + name + "\"");
}

/// Chord coordinate of a geodesic length: l, sinh(l/2), or sin(l/2). Scale
/// factors act multiplicatively on chords, so all length bookkeeping in the
/// energy runs through this map and its inverse.
inline double chord_length(Geometry g, double l) {
  if (!(l > 0.0) || !std::isfinite(l))
    throw Error(ErrorCode::NonPositiveLength, "length must be positive, got " + std::to_string(l));
  switch (g) {
    case Geometry::Euclidean: return l;
    case Geometry::Hyperbolic: return std::sinh(0.5 * l);
    case Geometry::Spherical:
      if (l >= std::numbers::pi)
        throw Error(ErrorCode::SphericalLengthOverflow,
                    "spherical length must be < pi, got " + std::to_string(l));
      return std::sin(0.5 * l);
  }
  return l;
}

inline double inverse_chord(Geometry g, double L) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw Error(ErrorCode::NonPositiveLength, "chord must be positive, got " + std::to_string(L));
  switch (g) {
    case Geometry::Euclidean: return L;
    case Geometry::Hyperbolic: return 2.0 * std::asinh(L);
    case Geometry::Spherical:
      if (L >= 1.0)
        throw Error(ErrorCode::SphericalChordOverflow,
                    "spherical chord must be < 1, got " + std::to_string(L));
      return 2.0 * std::asin(L);
  }
  return L;
}

/// True when the lengths bound a nondegenerate geodesic triangle: strict
/// triangle inequalities, and for spherical lengths additionally each side
/// < pi and perimeter < 2*pi.
inline bool triangle_admissible(Geometry g, const std::array<double, 3>& l) {
  for (double x : l)
    if (!(x > 0.0) || !std::isfinite(x)) return false;
  if (!(l[0] < l[1] + l[2] && l[1] < l[2] + l[0] && l[2] < l[0] + l[1])) return false;
  if (g == Geometry::Spherical) {
    for (double x : l)
      if (!(x < std::numbers::pi)) return false;
    if (!(l[0] + l[1] + l[2] < 2.0 * std::numbers::pi)) return false;
  }
  return true;
}

struct TriangleAngles {
  std::array<double, 3> angle;  // angle[m] sits at the corner opposite side l[m]
  double area;

  double angle_sum() const { return angle[0] + angle[1] + angle[2]; }
};

namespace detail {

inline double length_metric(Geometry g, double x) {
  switch (g) {
    case Geometry::Euclidean: return x;
    case Geometry::Hyperbolic: return std::sinh(x);
    case Geometry::Spherical: return std::sin(x);
  }
  return x;
}

}  // namespace detail

/// Corner angles and area of the geodesic triangle with side lengths l.
/// Angles come from the half-angle form with semiperimeter arguments,
///   tan(a_m/2) = sqrt(M(s-l_j) M(s-l_k) / (M(s) M(s-l_m))),
/// with M = id / sinh / sin, evaluated through atan2 so corners stay in
/// (0, pi) without overflow near right and obtuse angles.
inline TriangleAngles triangle_angles(Geometry g, const std::array<double, 3>& l) {
  if (!triangle_admissible(g, l))
    throw Error(ErrorCode::InvalidTriangle, "lengths (" + std::to_string(l[0]) + ", " +
                                                std::to_string(l[1]) + ", " + std::to_string(l[2]) +
                                                ") do not bound a triangle");
  const double s = 0.5 * (l[0] + l[1] + l[2]);
  const double ms = detail::length_metric(g, s);
  const std::array<double, 3> md = {detail::length_metric(g, s - l[0]),
                                    detail::length_metric(g, s - l[1]),
                                    detail::length_metric(g, s - l[2])};
  TriangleAngles out{};
  for (int m = 0; m < 3; ++m) {
    int j = (m + 1) % 3, k = (m + 2) % 3;
    out.angle[m] = 2.0 * std::atan2(std::sqrt(md[j] * md[k]), std::sqrt(ms * md[m]));
  }
  switch (g) {
    case Geometry::Euclidean:
      out.area = std::sqrt(std::fmax(0.0, ms * md[0] * md[1] * md[2]));
      break;
    case Geometry::Hyperbolic:
      out.area = std::fmax(0.0, std::numbers::pi - out.angle_sum());
      break;
    case Geometry::Spherical:
      out.area = std::fmax(0.0, out.angle_sum() - std::numbers::pi);
      break;
  }
  return out;
}

}  // namespace dcv
