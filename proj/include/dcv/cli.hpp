#pragma once

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dcv/contour.hpp"
#include "dcv/obj_io.hpp"
#include "dcv/problem_io.hpp"
#include "dcv/solution_io.hpp"
#include "dcv/solver.hpp"
#include "dcv/svg.hpp"
#include "dcv/vortex.hpp"

namespace dcv {
namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Edge lengths for mapping mode: explicit per-edge values when the problem
// file provides them (they must then cover every edge), otherwise the
// embedding lengths.
inline std::vector<double> mapping_lengths(const EmbeddedMesh& mesh, const MappingSpec& spec) {
  if (spec.lengths.empty()) return mesh.edge_lengths;
  const auto& surface = *mesh.surface;
  std::vector<double> lengths(surface.edge_count());
  std::vector<char> seen(surface.edge_count(), 0);
  for (const auto& [a, b, l] : spec.lengths) {
    if (a < 0 || a >= surface.vertex_count() || b < 0 || b >= surface.vertex_count())
      throw Error(ErrorCode::SchemaError,
                  "lengths: vertex pair " + std::to_string(a) + "-" + std::to_string(b) +
                      " out of range");
    EdgeId e = surface.edge_between(a, b);
    if (e == kNoEdge)
      throw Error(ErrorCode::SchemaError, "lengths: mesh has no edge " + std::to_string(a) + "-" +
                                              std::to_string(b));
    lengths[e] = l;
    seen[e] = 1;
  }
  for (EdgeId e = 0; e < surface.edge_count(); ++e)
    if (!seen[e]) {
      const auto& ev = surface.edge_vertices(e);
      throw Error(ErrorCode::SchemaError, "lengths: missing value for edge " +
                                              std::to_string(ev[0]) + "-" +
                                              std::to_string(ev[1]));
    }
  return lengths;
}

inline MappingProblem build_mapping_problem(const EmbeddedMesh& mesh, const MappingSpec& spec) {
  const auto& surface = *mesh.surface;
  auto source =
      DiscreteMetric::create(mesh.surface, spec.source_geometry, mapping_lengths(mesh, spec));

  std::vector<double> targets(surface.vertex_count(), 0.0);
  std::vector<char> covered(surface.vertex_count(), 0);
  for (const auto& [v, angle] : spec.theta_targets) {
    if (v >= surface.vertex_count())
      throw Error(ErrorCode::SchemaError,
                  "theta_targets: vertex " + std::to_string(v) + " out of range");
    targets[v] = angle;
    covered[v] = 1;
  }
  for (const auto& [v, u] : spec.pinned) {
    if (v >= surface.vertex_count())
      throw Error(ErrorCode::SchemaError, "pinned: vertex " + std::to_string(v) + " out of range");
    covered[v] = 1;
  }
  for (VertexId v = 0; v < surface.vertex_count(); ++v)
    if (!covered[v])
      throw Error(ErrorCode::SchemaError, "vertex " + std::to_string(v) +
                                              " has neither an angle target nor a pinned value");

  return MappingProblem::create(std::move(source), spec.target_geometry, std::move(targets),
                                spec.pinned);
}

inline void print_solution_summary(std::ostream& os, const SolutionRecord& record) {
  os << "status: " << record.status << "\n"
     << "iterations: " << record.iterations << "\n"
     << "final_grad_norm: " << fmt17(record.final_grad_norm) << "\n";
}

inline int run_validate(const std::string& mesh_path, const std::string& geometry_name,
                        double scale) {
  auto mesh = load_obj(mesh_path);
  auto geometry = geometry_from_string(geometry_name);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorCode::NonPositiveLength, "scale must be positive");
  std::vector<double> lengths = mesh.edge_lengths;
  for (double& l : lengths) l *= scale;

  const auto& surface = *mesh.surface;
  std::cout << "vertices: " << surface.vertex_count() << "\n"
            << "edges: " << surface.edge_count() << "\n"
            << "faces: " << surface.face_count() << "\n"
            << "euler_characteristic: " << surface.euler_characteristic() << "\n"
            << "closed: " << (surface.closed() ? "yes" : "no") << "\n"
            << "geometry: " << to_string(geometry) << "\n";
  auto report = validate_lengths(surface, geometry, lengths);
  std::cout << "metric: " << report.summary() << "\n";
  return report.admissible() ? 0 : 1;
}

inline int run_solve(const std::string& mesh_path, const std::string& problem_path,
                     const std::string& out_dir, double tol, int max_iter) {
  auto mesh = load_obj(mesh_path);
  auto spec = parse_problem(read_file(problem_path));
  if (spec.mode != "mapping")
    throw Error(ErrorCode::SchemaError,
                "problem file is " + spec.mode + " mode; the solve command expects mapping mode");

  auto problem = build_mapping_problem(mesh, *spec.mapping);
  SolverOptions options;
  options.grad_tol = tol;
  options.max_iterations = max_iter;
  auto solution = solve(problem, problem.start_point(), options);

  std::filesystem::create_directories(out_dir);
  auto record = make_record(problem, solution);
  write_solution(record, std::filesystem::path(out_dir) / "solution.json",
                 std::filesystem::path(out_dir) / "solution.csv");
  print_solution_summary(std::cout, record);
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "solution.json").string() << "\n";
  if (solution.status != SolveStatus::Converged) {
    std::cerr << "solve did not converge: " << record.status << "\n";
    return 1;
  }
  return 0;
}

inline int run_vortex(const std::string& mesh_path, const std::string& problem_path,
                      const std::string& out_dir, int levels, double tol) {
  auto mesh = load_obj(mesh_path);
  auto spec = parse_problem(read_file(problem_path));
  if (spec.mode != "vortex")
    throw Error(ErrorCode::SchemaError,
                "problem file is " + spec.mode + " mode; the vortex command expects vortex mode");

  auto problem = build_vortex_problem(mesh.surface, mesh.edge_lengths, *spec.vortex);
  SolverOptions options;
  options.grad_tol = tol;
  auto vs = solve_vortex(problem, options);

  std::filesystem::create_directories(out_dir);
  auto record = make_record(problem, vs);
  write_solution(record, std::filesystem::path(out_dir) / "solution.json",
                 std::filesystem::path(out_dir) / "solution.csv");
  print_solution_summary(std::cout, record);

  if (mesh.planar()) {
    auto level_values = default_levels(vs.higgs_amplitude, levels);
    auto contours = extract_contours(mesh, vs.higgs_amplitude, level_values);
    write_svg(mesh, contours, std::filesystem::path(out_dir) / "contours.svg");
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "contours.svg").string() << "\n";
  } else {
    std::cout << "mesh is not planar; skipping contour rendering\n";
  }
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "solution.json").string() << "\n";
  if (vs.solution.status != SolveStatus::Converged) {
    std::cerr << "vortex solve did not converge: " << record.status << "\n";
    return 1;
  }
  return 0;
}

inline int run_contour(const std::string& solution_path, const std::string& mesh_path,
                       const std::string& out_path, int levels) {
  auto mesh = load_obj(mesh_path);
  auto record = parse_solution(read_file(solution_path));
  const auto& surface = *mesh.surface;
  if (record.vertices.size() != static_cast<std::size_t>(surface.vertex_count()))
    throw Error(ErrorCode::SchemaError, "solution has " + std::to_string(record.vertices.size()) +
                                            " vertex rows but the mesh has " +
                                            std::to_string(surface.vertex_count()) + " vertices");
  std::vector<double> field(surface.vertex_count());
  for (const auto& row : record.vertices) {
    if (row.vertex < 0 || row.vertex >= surface.vertex_count())
      throw Error(ErrorCode::SchemaError,
                  "solution vertex " + std::to_string(row.vertex) + " out of range");
    field[row.vertex] = row.higgs_amplitude;
  }
  auto level_values = default_levels(field, levels);
  auto contours = extract_contours(mesh, field, level_values);
  write_svg(mesh, contours, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace detail

/// Entry point behind the `dcv` binary, exposed for in-process testing.
/// Exit codes: 0 success, 1 validation or solve failure, 2 usage error.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"discrete conformal vortex toolkit"};
  app.require_subcommand(1);

  std::string mesh_path, problem_path, solution_path, out_path, geometry_name = "euclidean";
  double scale = 1.0, tol = 1e-10;
  int max_iter = 100, levels = 10;

  auto* validate = app.add_subcommand("validate", "check a mesh and metric for admissibility");
  validate->add_option("--mesh", mesh_path, "OBJ mesh file")->required();
  validate->add_option("--geometry", geometry_name, "euclidean | hyperbolic | spherical");
  validate->add_option("--scale", scale, "multiply embedding lengths by this factor");

  auto* solve_cmd = app.add_subcommand("solve", "solve a mapping-mode problem");
  solve_cmd->add_option("--mesh", mesh_path, "OBJ mesh file")->required();
  solve_cmd->add_option("--problem", problem_path, "problem JSON (mapping mode)")->required();
  solve_cmd->add_option("--out", out_path, "output directory")->required();
  solve_cmd->add_option("--tol", tol, "gradient max-norm tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "Newton iteration cap");

  auto* vortex_cmd = app.add_subcommand("vortex", "build and solve a vortex problem");
  vortex_cmd->add_option("--mesh", mesh_path, "OBJ mesh file")->required();
  vortex_cmd->add_option("--problem", problem_path, "problem JSON (vortex mode)")->required();
  vortex_cmd->add_option("--out", out_path, "output directory")->required();
  vortex_cmd->add_option("--levels", levels, "number of level curves");
  vortex_cmd->add_option("--tol", tol, "gradient max-norm tolerance");

  auto* contour_cmd = app.add_subcommand("contour", "render level curves from a solution");
  contour_cmd->add_option("--solution", solution_path, "solution JSON")->required();
  contour_cmd->add_option("--mesh", mesh_path, "OBJ mesh file")->required();
  contour_cmd->add_option("--out", out_path, "output SVG path")->required();
  contour_cmd->add_option("--levels", levels, "number of level curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return detail::run_validate(mesh_path, geometry_name, scale);
    if (solve_cmd->parsed()) return detail::run_solve(mesh_path, problem_path, out_path, tol, max_iter);
    if (vortex_cmd->parsed()) return detail::run_vortex(mesh_path, problem_path, out_path, levels, tol);
    if (contour_cmd->parsed()) return detail::run_contour(solution_path, mesh_path, out_path, levels);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dcv
