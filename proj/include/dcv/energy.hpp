#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcv/lobachevsky.hpp"
#include "dcv/metric.hpp"

namespace dcv {

/// One logarithmic scale factor per vertex.
using ScaleFactors = std::vector<double>;

/// Angle assignment problem: find u so that the source metric, conformally
/// rescaled and read in the target geometry, has cone angle target_angle[v]
/// at every free vertex. Pinned vertices have their u value fixed instead of
/// an angle prescribed.
class MappingProblem {
 public:
  static MappingProblem create(DiscreteMetric source, Geometry target_geometry,
                               std::vector<double> target_angles,
                               const std::vector<std::pair<VertexId, double>>& pins = {}) {
    const auto& surface = source.surface();
    const auto nv = surface.vertex_count();
    if (target_angles.size() != static_cast<std::size_t>(nv))
      throw Error(ErrorCode::InvalidIndex, "target angle vector size does not match vertex count");

    MappingProblem p(std::move(source), target_geometry);
    p.target_angle_ = std::move(target_angles);
    p.pinned_.assign(nv, 0);
    p.pinned_value_.assign(nv, 0.0);
    for (const auto& [v, value] : pins) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::InvalidIndex, "pinned vertex out of range");
      if (p.pinned_[v]) throw Error(ErrorCode::InvalidIndex, "vertex pinned twice");
      if (!std::isfinite(value))
        throw Error(ErrorCode::InvalidIndex, "pinned value must be finite");
      p.pinned_[v] = 1;
      p.pinned_value_[v] = value;
    }

    p.free_index_.assign(nv, -1);
    for (VertexId v = 0; v < nv; ++v) {
      if (p.pinned_[v]) continue;
      double t = p.target_angle_[v];
      if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::InvalidIndex,
                    "target angle at vertex " + std::to_string(v) + " must be positive");
      p.free_index_[v] = static_cast<std::int32_t>(p.free_vertices_.size());
      p.free_vertices_.push_back(v);
    }

    // With all vertices free on a closed surface, a euclidean target is
    // solvable only if the angles sum to pi per face: the total corner angle
    // is invariant under rescaling.
    if (surface.closed() && target_geometry == Geometry::Euclidean &&
        p.free_vertices_.size() == static_cast<std::size_t>(nv)) {
      double total = 0.0;
      for (double t : p.target_angle_) total += t;
      double expected = std::numbers::pi * surface.face_count();
      if (std::fabs(total - expected) > 1e-8 * std::fmax(1.0, expected))
        throw Error(ErrorCode::SolvabilityViolation,
                    "target angles sum to " + std::to_string(total) + ", expected pi*F = " +
                        std::to_string(expected));
    }
    return p;
  }

  const DiscreteMetric& source() const { return source_; }
  Geometry target_geometry() const { return target_geometry_; }
  const std::vector<double>& target_angles() const { return target_angle_; }
  bool is_pinned(VertexId v) const { return pinned_.at(v) != 0; }
  double pinned_value(VertexId v) const { return pinned_value_.at(v); }
  const std::vector<VertexId>& free_vertices() const { return free_vertices_; }
  std::int32_t free_index(VertexId v) const { return free_index_.at(v); }
  bool any_pinned() const { return free_vertices_.size() != pinned_.size(); }

  /// Zero scale factors with pinned values filled in.
  ScaleFactors start_point() const {
    ScaleFactors u(pinned_.size(), 0.0);
    apply_pins(u);
    return u;
  }

  void apply_pins(ScaleFactors& u) const {
    for (std::size_t v = 0; v < pinned_.size(); ++v)
      if (pinned_[v]) u[v] = pinned_value_[v];
  }

 private:
  MappingProblem(DiscreteMetric source, Geometry target)
      : source_(std::move(source)), target_geometry_(target) {}

  DiscreteMetric source_;
  Geometry target_geometry_;
  std::vector<double> target_angle_;
  std::vector<std::uint8_t> pinned_;
  std::vector<double> pinned_value_;
  std::vector<VertexId> free_vertices_;
  std::vector<std::int32_t> free_index_;
};

struct CircumAngles {
  std::array<double, 3> beta;
  double sigma;  // common offset (pi - alpha_sum)/2; beta_m = alpha_m + sigma
};

/// Solves alpha_i + beta_j + beta_k = pi (indices cyclic) for the beta's.
/// These are the angles the triangle's circumscribed configuration
/// contributes to the potential; they must land in [0, pi].
inline CircumAngles beta_from_alpha(const TriangleAngles& alpha) {
  CircumAngles out{};
  out.sigma = 0.5 * (std::numbers::pi - alpha.angle_sum());
  for (int m = 0; m < 3; ++m) {
    out.beta[m] = alpha.angle[m] + out.sigma;
    if (out.beta[m] < -1e-12 || out.beta[m] > std::numbers::pi + 1e-12)
      throw Error(ErrorCode::BetaOutOfRange,
                  "circumscribed angle " + std::to_string(out.beta[m]) + " outside [0, pi]");
  }
  return out;
}

namespace detail {

struct FaceEval {
  TriangleAngles alpha;
  CircumAngles beta;
  double potential;
};

// Shared by the potential and the energy: chords are passed in so callers
// can keep them bitwise-consistent with rescale().
inline FaceEval eval_face(Geometry target, const std::array<double, 3>& lam,
                          const std::array<double, 3>& chord) {
  std::array<double, 3> l{};
  for (int m = 0; m < 3; ++m) l[m] = inverse_chord(target, chord[m]);
  FaceEval out{};
  out.alpha = triangle_angles(target, l);
  out.beta = beta_from_alpha(out.alpha);
  double value = lobachevsky(out.beta.sigma);
  for (int m = 0; m < 3; ++m) {
    value += out.beta.beta[m] * lam[m];
    value += lobachevsky(out.alpha.angle[m]);
    value += lobachevsky(out.beta.beta[m]);
  }
  out.potential = value;
  return out;
}

}  // namespace detail

/// Per-triangle potential f(lambda) whose partial derivatives are the
/// circumscribed angles beta_m. Throws InvalidTriangle (or chord overflow
/// for spherical targets) outside the feasible set.
inline double triangle_potential(Geometry target, const std::array<double, 3>& lam) {
  std::array<double, 3> chord{};
  for (int m = 0; m < 3; ++m) chord[m] = std::exp(0.5 * lam[m]);
  return detail::eval_face(target, lam, chord).potential;
}

struct EnergyEvaluation {
  bool feasible = false;
  ValidationReport report;                    // populated when infeasible
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> gradient;               // one entry per free vertex
  std::vector<double> achieved_angle;         // one entry per vertex
};

/// Evaluates the mapping energy
///   E(u) = sum_faces [ f(lambda~) - (pi/2)(lambda~_0+lambda~_1+lambda~_2) ]
///        + sum_{v free} Theta_v u_v
/// together with its gradient dE/du_v = Theta_v - Theta~_v(u), the prescribed
/// minus the achieved cone angle. Infeasible u (rescaled lengths violating
/// admissibility) yields feasible = false and a violation report instead.
inline EnergyEvaluation energy(const MappingProblem& problem, const ScaleFactors& u) {
  const auto& metric = problem.source();
  const auto& surface = metric.surface();
  const Geometry target = problem.target_geometry();
  if (u.size() != static_cast<std::size_t>(surface.vertex_count()))
    throw Error(ErrorCode::InvalidIndex, "scale factor vector size does not match vertex count");

  EnergyEvaluation out;

  std::vector<double> chord(surface.edge_count());
  std::vector<double> lam(surface.edge_count());
  std::vector<bool> edge_ok(surface.edge_count(), true);
  for (EdgeId e = 0; e < surface.edge_count(); ++e) {
    const auto& ev = surface.edge_vertices(e);
    chord[e] = std::exp(0.5 * (u[ev[0]] + u[ev[1]])) * metric.chords()[e];
    lam[e] = metric.log_lengths()[e] + u[ev[0]] + u[ev[1]];
    if (!(chord[e] > 0.0) || !std::isfinite(chord[e])) {
      out.report.violations.push_back({ViolationKind::NonFiniteLength, kNoFace, e, chord[e]});
      edge_ok[e] = false;
    } else if (target == Geometry::Spherical && chord[e] >= 1.0) {
      out.report.violations.push_back({ViolationKind::ChordOverflow, kNoFace, e, chord[e]});
      edge_ok[e] = false;
    }
  }

  std::vector<double> lengths(surface.edge_count(), 0.0);
  for (EdgeId e = 0; e < surface.edge_count(); ++e)
    if (edge_ok[e]) lengths[e] = inverse_chord(target, chord[e]);

  for (FaceId f = 0; f < surface.face_count(); ++f) {
    const auto& fe = surface.face_edges(f);
    if (!(edge_ok[fe[0]] && edge_ok[fe[1]] && edge_ok[fe[2]])) continue;
    const std::array<double, 3> l = {lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]};
    if (triangle_admissible(target, l)) continue;
    for (int m = 0; m < 3; ++m)
      if (!(l[m] < l[(m + 1) % 3] + l[(m + 2) % 3]))
        out.report.violations.push_back({ViolationKind::TriangleInequality, f, fe[m], l[m]});
    if (target == Geometry::Spherical && !(l[0] + l[1] + l[2] < 2.0 * std::numbers::pi))
      out.report.violations.push_back(
          {ViolationKind::SphericalPerimeter, f, kNoEdge, l[0] + l[1] + l[2]});
  }
  if (!out.report.admissible()) return out;

  out.feasible = true;
  out.achieved_angle.assign(surface.vertex_count(), 0.0);
  double value = 0.0;
  for (FaceId f = 0; f < surface.face_count(); ++f) {
    const auto& fe = surface.face_edges(f);
    const std::array<double, 3> flam = {lam[fe[0]], lam[fe[1]], lam[fe[2]]};
    const std::array<double, 3> fchord = {chord[fe[0]], chord[fe[1]], chord[fe[2]]};
    auto fe_eval = detail::eval_face(target, flam, fchord);
    value += fe_eval.potential - 0.5 * std::numbers::pi * (flam[0] + flam[1] + flam[2]);
    const auto& c = surface.face_vertices(f);
    for (int m = 0; m < 3; ++m) out.achieved_angle[c[m]] += fe_eval.alpha.angle[m];
  }
  for (VertexId v : problem.free_vertices()) value += problem.target_angles()[v] * u[v];
  out.value = value;

  out.gradient.resize(problem.free_vertices().size());
  for (std::size_t i = 0; i < problem.free_vertices().size(); ++i) {
    VertexId v = problem.free_vertices()[i];
    out.gradient[i] = problem.target_angles()[v] - out.achieved_angle[v];
  }
  return out;
}

/// Gradient of the energy over free vertices. Throws Infeasible where
/// energy() would report infeasibility.
inline std::vector<double> gradient(const MappingProblem& problem, const ScaleFactors& u) {
  auto eval = energy(problem, u);
  if (!eval.feasible) throw Error(ErrorCode::Infeasible, eval.report.summary());
  return std::move(eval.gradient);
}

inline ValidationReport feasibility(const MappingProblem& problem, const ScaleFactors& u) {
  return rescale(problem.source(), u, problem.target_geometry()).report;
}

/// Hessian of the energy over free vertices, assembled from per-face 3x3
/// blocks: H_vw = -sum_f d(alpha_v)/d(u_w). Each block is a central finite
/// difference of the face's angle map and is symmetrized exactly, so the
/// returned matrix is symmetric by construction.
inline Eigen::SparseMatrix<double> hessian(const MappingProblem& problem, const ScaleFactors& u,
                                           double step = 1e-6) {
  const auto& metric = problem.source();
  const auto& surface = metric.surface();
  const Geometry target = problem.target_geometry();
  const auto n = static_cast<Eigen::Index>(problem.free_vertices().size());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(surface.face_count()) * 9);

  for (FaceId f = 0; f < surface.face_count(); ++f) {
    const auto& c = surface.face_vertices(f);
    const auto& fe = surface.face_edges(f);

    // Angles of face f as a function of offsets to its three corner scale
    // factors; everything else is frozen.
    auto angles_at = [&](const std::array<double, 3>& du) {
      std::array<double, 3> l{};
      for (int m = 0; m < 3; ++m) {
        int j = (m + 1) % 3, k = (m + 2) % 3;
        double chord =
            std::exp(0.5 * (u[c[j]] + du[j] + u[c[k]] + du[k])) * metric.chords()[fe[m]];
        if (!(chord > 0.0) || !std::isfinite(chord) ||
            (target == Geometry::Spherical && chord >= 1.0))
          throw Error(ErrorCode::Infeasible, "face " + std::to_string(f) +
                                                 " leaves the feasible set under perturbation");
        l[m] = inverse_chord(target, chord);
      }
      if (!triangle_admissible(target, l))
        throw Error(ErrorCode::Infeasible,
                    "face " + std::to_string(f) + " leaves the feasible set under perturbation");
      return triangle_angles(target, l).angle;
    };

    // A face lying within `step` of the feasible boundary gets its difference
    // step shrunk rather than failing the assembly; a feasibility-guarded
    // line search can accept iterates arbitrarily close to the boundary.
    std::array<std::array<double, 3>, 3> d{};  // d[m][w] = d(alpha_m)/d(du_w)
    double face_step = step;
    for (int attempt = 0;; ++attempt) {
      try {
        for (int w = 0; w < 3; ++w) {
          std::array<double, 3> du{};
          du[w] = face_step;
          auto plus = angles_at(du);
          du[w] = -face_step;
          auto minus = angles_at(du);
          for (int m = 0; m < 3; ++m) d[m][w] = (plus[m] - minus[m]) / (2.0 * face_step);
        }
        break;
      } catch (const Error&) {
        if (attempt >= 20) throw;
        face_step *= 0.25;
      }
    }

    for (int m = 0; m < 3; ++m) {
      auto row = problem.free_index(c[m]);
      if (row < 0) continue;
      for (int w = 0; w < 3; ++w) {
        auto col = problem.free_index(c[w]);
        if (col < 0) continue;
        triplets.emplace_back(row, col, -0.5 * (d[m][w] + d[w][m]));
      }
    }
  }

  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

}  // namespace dcv
