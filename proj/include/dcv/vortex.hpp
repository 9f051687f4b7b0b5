#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcv/solver.hpp"

namespace dcv {

/// Curvature pair (c0, c): c0 is the background curvature (source geometry),
/// c the constant multiplying |phi|^2 in the vortex equation (target
/// geometry). Only five pairs give vortex equations of this family.
struct VortexConstants {
  int c0 = -1;
  int c = -1;
};

inline bool operator==(VortexConstants a, VortexConstants b) {
  return a.c0 == b.c0 && a.c == b.c;
}

inline constexpr const char* kVortexPresets[] = {"taubes", "bradlow", "ambjorn-olesen",
                                                 "jackiw-pi", "popov"};

inline VortexConstants preset_constants(const std::string& name) {
  if (name == "taubes") return {-1, -1};
  if (name == "bradlow") return {-1, 0};
  if (name == "ambjorn-olesen") return {-1, +1};
  if (name == "jackiw-pi") return {0, +1};
  if (name == "popov") return {+1, +1};
  throw Error(ErrorCode::UnknownPreset,
              "unknown vortex preset \"" + name +
                  "\"; expected one of taubes, bradlow, ambjorn-olesen, jackiw-pi, popov");
}

inline void check_constants(VortexConstants k) {
  for (const char* name : kVortexPresets)
    if (preset_constants(name) == k) return;
  throw Error(ErrorCode::InvalidConstantPair,
              "(c0, c) = (" + std::to_string(k.c0) + ", " + std::to_string(k.c) +
                  ") is not an admissible pair; the five vortex types are taubes (-1,-1), "
                  "bradlow (-1,0), ambjorn-olesen (-1,+1), jackiw-pi (0,+1), popov (+1,+1)");
}

/// Geometry of constant curvature c.
inline Geometry geometry_for(int c) {
  switch (c) {
    case -1: return Geometry::Hyperbolic;
    case 0: return Geometry::Euclidean;
    case +1: return Geometry::Spherical;
  }
  throw Error(ErrorCode::InvalidConstantPair, "curvature constant must be -1, 0, or +1");
}

enum class BoundaryCondition { DirichletZero, Free };

inline const char* to_string(BoundaryCondition b) {
  return b == BoundaryCondition::DirichletZero ? "dirichlet_zero" : "free";
}

struct VortexSpec {
  VortexConstants constants;
  std::vector<std::pair<VertexId, int>> vortices;  // (center, multiplicity n >= 1)
  BoundaryCondition boundary_condition = BoundaryCondition::DirichletZero;
  double length_scale = 1.0;
};

struct VortexProblem {
  VortexSpec spec;
  int total_vortex_number = 0;
  MappingProblem problem;
};

/// Sets up the conformal-mapping problem whose solution is a discrete vortex:
/// the base lengths (scaled by length_scale) are read as a metric of the
/// geometry with curvature c0, and the target prescribes that metric's cone
/// angles with an extra 2*pi*n at each vortex center, read in the geometry
/// with curvature c. Under dirichlet_zero, boundary vertices are pinned to
/// u = 0 (Higgs amplitude 1) instead of receiving an angle target.
inline VortexProblem build_vortex_problem(SurfacePtr surface, std::span<const double> base_lengths,
                                          const VortexSpec& spec) {
  check_constants(spec.constants);
  if (!(spec.length_scale > 0.0) || !std::isfinite(spec.length_scale))
    throw Error(ErrorCode::NonPositiveLength, "length scale must be positive");

  if (spec.vortices.empty())
    throw Error(ErrorCode::NonPositiveVortexNumber, "at least one vortex center is required");
  std::set<VertexId> centers;
  for (const auto& [v, n] : spec.vortices) {
    if (v < 0 || v >= surface->vertex_count())
      throw Error(ErrorCode::InvalidIndex, "vortex center " + std::to_string(v) + " out of range");
    if (n <= 0)
      throw Error(ErrorCode::NonPositiveVortexNumber,
                  "vortex number at vertex " + std::to_string(v) + " must be a positive integer");
    if (!centers.insert(v).second)
      throw Error(ErrorCode::InvalidIndex,
                  "vortex center " + std::to_string(v) + " listed more than once");
    if (surface->is_boundary_vertex(v))
      throw Error(ErrorCode::CenterOnBoundary,
                  "vortex center " + std::to_string(v) + " lies on the boundary");
  }

  const Geometry source_geometry = geometry_for(spec.constants.c0);
  const Geometry target_geometry = geometry_for(spec.constants.c);

  std::vector<double> lengths(base_lengths.begin(), base_lengths.end());
  for (double& l : lengths) l *= spec.length_scale;
  auto report = validate_lengths(*surface, source_geometry, lengths);
  if (!report.admissible())
    throw Error(ErrorCode::InadmissibleSource,
                "scaled lengths are not a " + std::string(to_string(source_geometry)) +
                    " metric: " + report.summary());
  auto source = DiscreteMetric::create(surface, source_geometry, std::move(lengths));

  auto targets = cone_angles(source);
  for (const auto& [v, n] : spec.vortices) targets[v] += 2.0 * std::numbers::pi * n;

  std::vector<std::pair<VertexId, double>> pins;
  if (spec.boundary_condition == BoundaryCondition::DirichletZero) {
    pins.reserve(surface->boundary_vertices().size());
    for (VertexId v : surface->boundary_vertices()) pins.emplace_back(v, 0.0);
  }

  VortexProblem out{spec, 0,
                    MappingProblem::create(std::move(source), target_geometry, std::move(targets),
                                           pins)};
  for (const auto& [v, n] : spec.vortices) out.total_vortex_number += n;
  return out;
}

struct VortexSolution {
  VortexSpec spec;
  int total_vortex_number = 0;
  std::vector<double> source_cone_angles;
  Solution solution;                    // u, status, achieved angles, Baptista metric
  std::vector<double> higgs_amplitude;  // exp(u_v); the level-curve field
};

/// Runs the Newton solver from u = 0 (with boundary pins applied). The Higgs
/// amplitude of the resulting vortex is exp(u); the rescaled target metric in
/// solution.target_metric is the associated conformal (Baptista) metric.
inline VortexSolution solve_vortex(const VortexProblem& vp, const SolverOptions& options = {}) {
  VortexSolution out{vp.spec, vp.total_vortex_number, cone_angles(vp.problem.source()), {}, {}};
  out.solution = solve(vp.problem, vp.problem.start_point(), options);
  out.higgs_amplitude.reserve(out.solution.u.size());
  for (double u : out.solution.u) out.higgs_amplitude.push_back(std::exp(u));
  return out;
}

inline VortexSolution run_vortex(SurfacePtr surface, std::span<const double> base_lengths,
                                 const VortexSpec& spec, const SolverOptions& options = {}) {
  return solve_vortex(build_vortex_problem(std::move(surface), base_lengths, spec), options);
}

}  // namespace dcv
