#pragma once

#include <stdexcept>
#include <string>

namespace dcv {

enum class ErrorCode {
  // combinatorics
  InvalidIndex,
  DegenerateFace,
  NonManifoldEdge,
  InconsistentOrientation,
  IsolatedVertex,
  NonDiskLink,
  // metric data
  NonPositiveLength,
  SphericalLengthOverflow,
  SphericalChordOverflow,
  InvalidTriangle,
  InadmissibleMetric,
  // energy and solver
  BetaOutOfRange,
  Infeasible,
  // vortex problems
  UnknownPreset,
  InvalidConstantPair,
  NonPositiveVortexNumber,
  CenterOnBoundary,
  SolvabilityViolation,
  InadmissibleSource,
  // file formats
  MalformedRecord,
  NonTriangleFace,
  NonPlanarMesh,
  SchemaError,
  IoFailure,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidIndex: return "invalid_index";
    case ErrorCode::DegenerateFace: return "degenerate_face";
    case ErrorCode::NonManifoldEdge: return "non_manifold_edge";
    case ErrorCode::InconsistentOrientation: return "inconsistent_orientation";
    case ErrorCode::IsolatedVertex: return "isolated_vertex";
    case ErrorCode::NonDiskLink: return "non_disk_link";
    case ErrorCode::NonPositiveLength: return "non_positive_length";
    case ErrorCode::SphericalLengthOverflow: return "spherical_length_overflow";
    case ErrorCode::SphericalChordOverflow: return "spherical_chord_overflow";
    case ErrorCode::InvalidTriangle: return "invalid_triangle";
    case ErrorCode::InadmissibleMetric: return "inadmissible_metric";
    case ErrorCode::BetaOutOfRange: return "beta_out_of_range";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::UnknownPreset: return "unknown_preset";
    case ErrorCode::InvalidConstantPair: return "invalid_constant_pair";
    case ErrorCode::NonPositiveVortexNumber: return "non_positive_vortex_number";
    case ErrorCode::CenterOnBoundary: return "center_on_boundary";
    case ErrorCode::SolvabilityViolation: return "solvability_violation";
    case ErrorCode::InadmissibleSource: return "inadmissible_source";
    case ErrorCode::MalformedRecord: return "malformed_record";
    case ErrorCode::NonTriangleFace: return "non_triangle_face";
    case ErrorCode::NonPlanarMesh: return "non_planar_mesh";
    case ErrorCode::SchemaError: return "schema_error";
    case ErrorCode::IoFailure: return "io_failure";
  }
  return "unknown";
}

/// Thrown on contract violations: bad indices, inadmissible inputs, malformed
/// files. Expected runtime outcomes (metric infeasibility during a solve,
/// non-convergence) are reported as data, not exceptions.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dcv
