#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "dcv/energy.hpp"

namespace dcv {

/// Handling of the constant-shift degeneracy. The energy of a closed surface
/// with euclidean target and no pinned vertices is invariant under adding a
/// constant to u, so its Hessian has a one-dimensional kernel. PinFirstVertex
/// freezes the lowest-numbered free vertex; MeanZero recenters u after every
/// step; None leaves the system singular and relies on regularization.
enum class Gauge { PinFirstVertex, MeanZero, None };

struct LineSearchOptions {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;  // Armijo constant for convex targets
  double min_step = 1e-14;            // fraction of the Newton step
};

struct SolverOptions {
  double grad_tol = 1e-10;  // on the max-norm of the gradient
  int max_iterations = 100;
  double regularization = 0.0;  // initial Tikhonov shift, escalated x10 as needed
  LineSearchOptions line_search;
  Gauge gauge = Gauge::PinFirstVertex;
};

enum class SolveStatus { Converged, MaxIterations, InfeasibleStart, LineSearchStall };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::InfeasibleStart: return "infeasible_start";
    case SolveStatus::LineSearchStall: return "line_search_stall";
  }
  return "unknown";
}

struct Solution {
  SolveStatus status = SolveStatus::InfeasibleStart;
  ScaleFactors u;
  int iterations = 0;
  double final_grad_norm = std::numeric_limits<double>::infinity();
  std::vector<double> achieved_angles;          // empty if the start was infeasible
  std::optional<DiscreteMetric> target_metric;  // rescaled source, when feasible
  std::vector<double> energy_history;           // energy at u0 and after each accepted step
};

namespace detail {

// Deletes one row/column (the gauged vertex) from the free-vertex system.
inline Eigen::SparseMatrix<double> drop_index(const Eigen::SparseMatrix<double>& h,
                                              Eigen::Index skip) {
  if (skip < 0) return h;
  Eigen::SparseMatrix<double> r(h.rows() - 1, h.cols() - 1);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(h.nonZeros()));
  for (Eigen::Index col = 0; col < h.outerSize(); ++col) {
    if (col == skip) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, col); it; ++it) {
      if (it.row() == skip) continue;
      triplets.emplace_back(it.row() - (it.row() > skip ? 1 : 0),
                            col - (col > skip ? 1 : 0), it.value());
    }
  }
  r.setFromTriplets(triplets.begin(), triplets.end());
  return r;
}

inline double max_norm(const std::vector<double>& g) {
  double m = 0.0;
  for (double x : g) m = std::fmax(m, std::fabs(x));
  return m;
}

inline double squared_norm(const std::vector<double>& g) {
  double s = 0.0;
  for (double x : g) s += x * x;
  return s;
}

}  // namespace detail

/// Damped Newton descent on the mapping energy, over the free vertices
/// (minus one when the gauge is active). Euclidean and hyperbolic targets
/// have convex energy: steps solve (H + sigma I) d = -grad and backtracking
/// enforces the Armijo condition while the predicted decrease is resolvable
/// in the energy value; once it drops below the evaluation's rounding noise
/// the energy comparison is uninformative and acceptance switches to a
/// strict gradient-norm decrease for the endgame. Spherical energy is not
/// convex and its Hessian can be indefinite or singular, so spherical
/// targets instead run damped Newton on the gradient-norm merit
/// 0.5*|grad|^2: steps solve (H^2 + sigma I) d = -H grad, which is a descent
/// direction for the merit whenever H grad is nonzero, and acceptance is a
/// strict decrease of the gradient norm. In both cases sigma starts at
/// options.regularization and escalates tenfold whenever factorization
/// fails, the direction is not a descent direction, or backtracking cannot
/// find an acceptable feasible step; every accepted step keeps the rescaled
/// metric admissible.
inline Solution solve(const MappingProblem& problem, const ScaleFactors& u0,
                      const SolverOptions& options = {}) {
  const auto& surface = problem.source().surface();
  const auto& free = problem.free_vertices();
  const auto n = static_cast<Eigen::Index>(free.size());
  const bool convex_target = problem.target_geometry() != Geometry::Spherical;

  if (u0.size() != static_cast<std::size_t>(surface.vertex_count()))
    throw Error(ErrorCode::InvalidIndex, "start vector size does not match vertex count");

  Solution out;
  out.u = u0;
  problem.apply_pins(out.u);

  const bool shift_invariant = surface.closed() &&
                               problem.target_geometry() == Geometry::Euclidean &&
                               !problem.any_pinned();
  const bool gauge_active = shift_invariant && options.gauge != Gauge::None && n > 0;
  const Eigen::Index gauge_slot = (gauge_active && options.gauge == Gauge::PinFirstVertex) ? 0 : -1;

  auto recenter = [&](ScaleFactors& u) {
    if (!(gauge_active && options.gauge == Gauge::MeanZero)) return;
    double mean = 0.0;
    for (VertexId v : free) mean += u[v];
    mean /= static_cast<double>(free.size());
    for (VertexId v : free) u[v] -= mean;
  };
  recenter(out.u);

  auto eval = energy(problem, out.u);
  if (!eval.feasible) {
    out.status = SolveStatus::InfeasibleStart;
    return out;
  }
  out.energy_history.push_back(eval.value);

  for (int it = 0; it < options.max_iterations; ++it) {
    out.final_grad_norm = detail::max_norm(eval.gradient);
    if (out.final_grad_norm < options.grad_tol) {
      out.status = SolveStatus::Converged;
      out.iterations = it;
      out.achieved_angles = eval.achieved_angle;
      out.target_metric = rescale(problem.source(), out.u, problem.target_geometry()).metric;
      return out;
    }

    auto h = hessian(problem, out.u);
    auto hs = detail::drop_index(h, gauge_slot);

    Eigen::VectorXd g(hs.rows());
    for (Eigen::Index i = 0, j = 0; i < n; ++i) {
      if (i == gauge_slot) continue;
      g(j++) = eval.gradient[static_cast<std::size_t>(i)];
    }

    // Convex targets step on the energy itself; spherical targets step on
    // the gradient-norm merit, whose damped Newton system squares H.
    Eigen::SparseMatrix<double> base;
    Eigen::VectorXd rhs;
    if (convex_target) {
      base = hs;
      rhs = -g;
    } else {
      base = Eigen::SparseMatrix<double>(hs * hs);
      rhs = -(hs * g);
    }

    double diag_scale = 1.0;
    if (base.rows() > 0) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < base.rows(); ++i) s += std::fabs(base.coeff(i, i));
      diag_scale = std::fmax(s / static_cast<double>(base.rows()), 1e-30);
    }
    const double sigma_cap = 1e12 * diag_scale;

    double sigma = options.regularization;
    bool stepped = false;
    const double gn2 = detail::squared_norm(eval.gradient);
    // The energy is a sum over all faces, so its evaluation carries rounding
    // noise proportional to its magnitude. fuzz keeps the Armijo test from
    // rejecting over the last couple of ulps; a predicted decrease below
    // noise_floor means the energy comparison carries no information at all,
    // and acceptance falls back to a strict gradient-norm decrease (whose
    // entries are short sums of angles, resolvable far below grad_tol).
    const double fuzz =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(eval.value));
    const double noise_floor = 1e-12 * (1.0 + std::fabs(eval.value));

    while (!stepped) {
      Eigen::SparseMatrix<double> sys = base;
      if (sigma > 0.0) {
        Eigen::SparseMatrix<double> idm(base.rows(), base.cols());
        idm.setIdentity();
        sys = base + sigma * idm;
      }
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys);
      bool usable = ldlt.info() == Eigen::Success;
      Eigen::VectorXd d;
      if (usable) {
        d = ldlt.solve(rhs);
        usable = d.allFinite();
      }
      if (usable) usable = convex_target ? g.dot(d) < 0.0 : rhs.dot(d) > 0.0;

      if (usable) {
        const double slope = g.dot(d);
        const bool energy_blind = convex_target && std::fabs(slope) <= noise_floor;
        double t = 1.0;
        while (t >= options.line_search.min_step) {
          ScaleFactors u_try = out.u;
          for (Eigen::Index i = 0, j = 0; i < n; ++i) {
            if (i == gauge_slot) continue;
            u_try[free[static_cast<std::size_t>(i)]] += t * d(j++);
          }
          recenter(u_try);
          auto eval_try = energy(problem, u_try);
          bool accept = eval_try.feasible;
          if (accept) {
            accept = convex_target && !energy_blind
                         ? eval_try.value <=
                               eval.value + options.line_search.sufficient_decrease * t * slope +
                                   fuzz
                         : detail::squared_norm(eval_try.gradient) < gn2;
          }
          if (accept) {
            out.u = std::move(u_try);
            eval = std::move(eval_try);
            out.energy_history.push_back(eval.value);
            stepped = true;
            break;
          }
          t *= options.line_search.shrink;
        }
      }

      if (!stepped) {
        sigma = sigma > 0.0 ? sigma * 10.0 : 1e-12 * diag_scale;
        if (sigma > sigma_cap) {
          out.status = SolveStatus::LineSearchStall;
          out.iterations = it;
          out.final_grad_norm = detail::max_norm(eval.gradient);
          out.achieved_angles = eval.achieved_angle;
          out.target_metric = rescale(problem.source(), out.u, problem.target_geometry()).metric;
          return out;
        }
      }
    }
  }

  out.final_grad_norm = detail::max_norm(eval.gradient);
  out.status = out.final_grad_norm < options.grad_tol ? SolveStatus::Converged
                                                      : SolveStatus::MaxIterations;
  out.iterations = options.max_iterations;
  out.achieved_angles = eval.achieved_angle;
  out.target_metric = rescale(problem.source(), out.u, problem.target_geometry()).metric;
  return out;
}

struct ResidualRow {
  VertexId vertex;
  std::optional<double> target;  // empty for pinned vertices
  double achieved;
  std::optional<double> difference;
};

/// Per-vertex comparison of prescribed and achieved cone angles at u.
/// Throws Infeasible if the rescaled metric is inadmissible.
inline std::vector<ResidualRow> residual_report(const MappingProblem& problem,
                                                const ScaleFactors& u) {
  auto eval = energy(problem, u);
  if (!eval.feasible) throw Error(ErrorCode::Infeasible, eval.report.summary());
  std::vector<ResidualRow> rows;
  const auto nv = problem.source().surface().vertex_count();
  rows.reserve(nv);
  for (VertexId v = 0; v < nv; ++v) {
    ResidualRow row{v, std::nullopt, eval.achieved_angle[v], std::nullopt};
    if (!problem.is_pinned(v)) {
      row.target = problem.target_angles()[v];
      row.difference = *row.target - row.achieved;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dcv
