#include <catch_amalgamated.hpp>

#include <dcv/dcv.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "meshes.hpp"

namespace {

template <typename Fn>
dcv::ErrorCode thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const dcv::Error& e) {
    return e.code();
  }
  FAIL("expected a dcv::Error");
  return dcv::ErrorCode::IoFailure;
}

template <typename Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const dcv::Error& e) {
    return e.what();
  }
  FAIL("expected a dcv::Error");
  return {};
}

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("dcv-io-" + std::to_string(counter.fetch_add(1)) + "-" +
            std::to_string(static_cast<unsigned>(std::random_device{}())));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string obj_text(const dcv::EmbeddedMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : mesh.positions) out << "v " << p[0] << " " << p[1] << " " << p[2] << "\n";
  for (const auto& f : mesh.surface->faces())
    out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  return out.str();
}

// Runs the CLI in-process with stdout and stderr suppressed so expected
// failures do not clutter the test log.
int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"dcv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream sink;
  auto* old_out = std::cout.rdbuf(sink.rdbuf());
  auto* old_err = std::cerr.rdbuf(sink.rdbuf());
  int rc = dcv::cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return rc;
}

}  // namespace

TEST_CASE("obj parser handles comments, blank lines, CRLF, and index suffixes") {
  const std::string text =
      "# right triangle with decorations\r\n"
      "o demo\n"
      "v 0 0 0\r\n"
      "v 1.0 0.0 0.0  # trailing comment\n"
      "\n"
      "vt 0.5 0.5\n"
      "vn 0 0 1\n"
      "v 0.0 1.0 0.0\n"
      "s off\n"
      "f 1/1/1 2/1/1 3//1\n";
  auto mesh = dcv::parse_obj(text);
  REQUIRE(mesh.surface->vertex_count() == 3);
  REQUIRE(mesh.surface->face_count() == 1);
  CHECK(mesh.positions[0] == std::array<double, 3>{0.0, 0.0, 0.0});
  CHECK(mesh.positions[1] == std::array<double, 3>{1.0, 0.0, 0.0});
  CHECK(mesh.positions[2] == std::array<double, 3>{0.0, 1.0, 0.0});

  auto e01 = mesh.surface->edge_between(0, 1);
  auto e02 = mesh.surface->edge_between(0, 2);
  auto e12 = mesh.surface->edge_between(1, 2);
  REQUIRE(e01 != dcv::kNoEdge);
  CHECK(mesh.edge_lengths[e01] == 1.0);
  CHECK(mesh.edge_lengths[e02] == 1.0);
  CHECK(mesh.edge_lengths[e12] == std::sqrt(2.0));
}

TEST_CASE("obj planarity test uses a z tolerance relative to mesh extent") {
  CHECK(dcv::parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 1e-12\nf 1 2 3\n").planar());
  CHECK_FALSE(dcv::parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0.1\nf 1 2 3\n").planar());
  // Extent floor of 1: a tiny mesh with sub-threshold z is still planar.
  CHECK(dcv::parse_obj("v 0 0 0\nv 1e-3 0 0\nv 0 1e-3 5e-10\nf 1 2 3\n").planar());
}

TEST_CASE("obj parse errors carry line numbers") {
  using dcv::ErrorCode;
  const std::string head = "v 0 0 0\nv 1 0 0\nv 0 1 0\n";

  auto quad = thrown_message([&] { dcv::parse_obj(head + "f 1 2 3 1\n"); });
  CHECK(thrown_code([&] { dcv::parse_obj(head + "f 1 2 3 1\n"); }) == ErrorCode::NonTriangleFace);
  CHECK(quad.find("line 4") != std::string::npos);

  CHECK(thrown_code([&] { dcv::parse_obj(head + "f 1 2\n"); }) == ErrorCode::MalformedRecord);
  CHECK(thrown_code([&] { dcv::parse_obj("v 0 0\n"); }) == ErrorCode::MalformedRecord);
  CHECK(thrown_code([&] { dcv::parse_obj("v 0 0 zero\n"); }) == ErrorCode::MalformedRecord);

  auto zero_index = thrown_message([&] { dcv::parse_obj(head + "f 0 1 2\n"); });
  CHECK(thrown_code([&] { dcv::parse_obj(head + "f 0 1 2\n"); }) == ErrorCode::MalformedRecord);
  CHECK(zero_index.find("1-based") != std::string::npos);

  // Out-of-range references are reported against the face's line even though
  // the check runs after the whole file is read.
  auto range = thrown_message([&] { dcv::parse_obj(head + "f 1 2 3\nf 1 3 4\n"); });
  CHECK(thrown_code([&] { dcv::parse_obj(head + "f 1 2 3\nf 1 3 4\n"); }) ==
        ErrorCode::MalformedRecord);
  CHECK(range.find("line 5") != std::string::npos);
  CHECK(range.find("out of range") != std::string::npos);

  // Connectivity problems surface through the same entry point.
  CHECK(thrown_code([&] { dcv::parse_obj(head + "v 0 0 1\nf 1 2 3\nf 1 2 4\n"); }) ==
        ErrorCode::InconsistentOrientation);
}

TEST_CASE("load_obj reads files and reports missing ones") {
  TempDir dir;
  auto grid = dcvtest::square_grid(2);
  write_file(dir.path / "grid.obj", obj_text(grid));

  auto mesh = dcv::load_obj(dir.path / "grid.obj");
  REQUIRE(mesh.surface->vertex_count() == grid.surface->vertex_count());
  REQUIRE(mesh.surface->face_count() == grid.surface->face_count());
  CHECK(mesh.positions == grid.positions);
  CHECK(mesh.edge_lengths == grid.edge_lengths);

  CHECK(thrown_code([&] { dcv::load_obj(dir.path / "nope.obj"); }) == dcv::ErrorCode::IoFailure);
}

TEST_CASE("vortex problem json accepts presets, constants, and options") {
  auto spec = dcv::parse_problem(R"({
    "mode": "vortex",
    "preset": "taubes",
    "vortices": [{"vertex": 12, "n": 2}, {"vertex": 3, "n": 1}],
    "boundary": "free",
    "scale": 0.5
  })");
  REQUIRE(spec.mode == "vortex");
  REQUIRE(spec.vortex.has_value());
  CHECK_FALSE(spec.mapping.has_value());
  CHECK(spec.vortex->constants == dcv::VortexConstants{-1, -1});
  REQUIRE(spec.vortex->vortices.size() == 2);
  CHECK(spec.vortex->vortices[0] == std::pair<dcv::VertexId, int>{12, 2});
  CHECK(spec.vortex->vortices[1] == std::pair<dcv::VertexId, int>{3, 1});
  CHECK(spec.vortex->boundary_condition == dcv::BoundaryCondition::Free);
  CHECK(spec.vortex->length_scale == 0.5);

  auto defaults = dcv::parse_problem(
      R"({"mode": "vortex", "constants": {"c0": 0, "c": 1}, "vortices": [{"vertex": 0, "n": 1}]})");
  CHECK(defaults.vortex->constants == dcv::VortexConstants{0, 1});
  CHECK(defaults.vortex->boundary_condition == dcv::BoundaryCondition::DirichletZero);
  CHECK(defaults.vortex->length_scale == 1.0);
}

TEST_CASE("vortex problem json rejects bad shapes with a path") {
  using dcv::ErrorCode;
  auto code = [](const std::string& text) {
    return thrown_code([&] { dcv::parse_problem(text); });
  };
  auto message = [](const std::string& text) {
    return thrown_message([&] { dcv::parse_problem(text); });
  };

  const std::string ok_vortices = R"("vortices": [{"vertex": 0, "n": 1}])";

  CHECK(code(R"({"mode": "vortex", "preset": "taubes", "constants": {"c0": -1, "c": -1}, )" +
             ok_vortices + "}") == ErrorCode::SchemaError);
  CHECK(code(R"({"mode": "vortex", )" + ok_vortices + "}") == ErrorCode::SchemaError);
  CHECK(code(R"({"mode": "vortex", "preset": "vorticity", )" + ok_vortices + "}") ==
        ErrorCode::UnknownPreset);
  CHECK(code(R"({"mode": "vortex", "constants": {"c0": 1, "c": 0}, )" + ok_vortices + "}") ==
        ErrorCode::InvalidConstantPair);
  CHECK(code(R"({"mode": "vortex", "constants": {"c0": -1}, )" + ok_vortices + "}") ==
        ErrorCode::SchemaError);

  CHECK(message(R"({"mode": "vortex", "preset": "taubes", "spin": 3, )" + ok_vortices + "}")
            .find("spin") != std::string::npos);
  CHECK(code(R"({"mode": "vortex", "preset": "taubes", "vortices": 7})") == ErrorCode::SchemaError);
  CHECK(message(R"({"mode": "vortex", "preset": "taubes",
                    "vortices": [{"vertex": 0, "n": 1}, {"vertex": 1}]})")
            .find("$.vortices[1]") != std::string::npos);
  CHECK(code(R"({"mode": "vortex", "preset": "taubes", "vortices": [{"vertex": -2, "n": 1}]})") ==
        ErrorCode::SchemaError);
  CHECK(code(R"({"mode": "vortex", "preset": "taubes", "vortices": [{"vertex": 0, "n": 1.5}]})") ==
        ErrorCode::SchemaError);
  CHECK(code(R"({"mode": "vortex", "preset": "taubes", "boundary": "clamped", )" + ok_vortices +
             "}") == ErrorCode::SchemaError);
}

TEST_CASE("mapping problem json parses targets, pins, and length overrides") {
  auto spec = dcv::parse_problem(R"({
    "mode": "mapping",
    "source_geometry": "euclidean",
    "target_geometry": "hyperbolic",
    "theta_targets": {"0": 6.283185307179586, "2": 3.5},
    "pinned": {"1": 0.25},
    "lengths": {"1-2": 2.0, "0-1": 1.5}
  })");
  REQUIRE(spec.mode == "mapping");
  REQUIRE(spec.mapping.has_value());
  CHECK_FALSE(spec.vortex.has_value());
  const auto& m = *spec.mapping;
  CHECK(m.source_geometry == dcv::Geometry::Euclidean);
  CHECK(m.target_geometry == dcv::Geometry::Hyperbolic);
  REQUIRE(m.theta_targets.size() == 2);
  CHECK(m.theta_targets[0].second == 6.283185307179586);
  REQUIRE(m.pinned.size() == 1);
  CHECK(m.pinned[0] == std::pair<dcv::VertexId, double>{1, 0.25});
  // Length overrides come back sorted by canonical pair.
  REQUIRE(m.lengths.size() == 2);
  CHECK(m.lengths[0] == std::tuple<dcv::VertexId, dcv::VertexId, double>{0, 1, 1.5});
  CHECK(m.lengths[1] == std::tuple<dcv::VertexId, dcv::VertexId, double>{1, 2, 2.0});

  auto minimal = dcv::parse_problem(R"({
    "mode": "mapping",
    "source_geometry": "spherical",
    "target_geometry": "euclidean",
    "theta_targets": {"0": 1.0}
  })");
  CHECK(minimal.mapping->pinned.empty());
  CHECK(minimal.mapping->lengths.empty());
}

TEST_CASE("mapping problem json rejects bad shapes with a path") {
  using dcv::ErrorCode;
  auto code = [](const std::string& text) {
    return thrown_code([&] { dcv::parse_problem(text); });
  };
  auto message = [](const std::string& text) {
    return thrown_message([&] { dcv::parse_problem(text); });
  };
  const std::string base = R"("mode": "mapping", "source_geometry": "euclidean",
                              "target_geometry": "euclidean", "theta_targets": {"0": 1.0})";

  CHECK(code(R"({"mode": "mapping", "target_geometry": "euclidean", "theta_targets": {"0": 1}})") ==
        ErrorCode::SchemaError);
  CHECK(code(R"({"mode": "mapping", "source_geometry": "flat",
                 "target_geometry": "euclidean", "theta_targets": {"0": 1}})") ==
        ErrorCode::SchemaError);
  CHECK(message("{" + base + R"(, "pinned": {"0": 0.0}})").find("both pinned") !=
        std::string::npos);
  CHECK(code("{" + base + R"(, "lengths": {"3": 1.0}})") == ErrorCode::SchemaError);
  CHECK(code("{" + base + R"(, "lengths": {"2-2": 1.0}})") == ErrorCode::SchemaError);
  CHECK(message("{" + base + R"(, "lengths": {"4-1": 1.0}})").find("canonical") !=
        std::string::npos);
  CHECK(code("{" + base + R"(, "lengths": {"a-b": 1.0}})") == ErrorCode::SchemaError);
  CHECK(code("{" + base + R"(, "theta_targets": {"-1": 1.0}})") == ErrorCode::SchemaError);
}

TEST_CASE("problem json rejects malformed documents") {
  using dcv::ErrorCode;
  CHECK(thrown_message([] { dcv::parse_problem("{nope"); }).find("$:") != std::string::npos);
  CHECK(thrown_code([] { dcv::parse_problem("[1, 2]"); }) == ErrorCode::SchemaError);
  CHECK(thrown_code([] { dcv::parse_problem("{}"); }) == ErrorCode::SchemaError);
  CHECK(thrown_message([] { dcv::parse_problem(R"({"mode": "fish"})"); }).find("$.mode") !=
        std::string::npos);
}

TEST_CASE("vortex solution record round-trips through json exactly") {
  auto mesh = dcvtest::square_grid(4);
  dcv::VortexSpec spec;
  spec.constants = dcv::preset_constants("taubes");
  spec.vortices = {{dcvtest::nearest_vertex(mesh, 0.0, 0.0), 1}};
  auto problem = dcv::build_vortex_problem(mesh.surface, mesh.edge_lengths, spec);
  auto vs = dcv::solve_vortex(problem);
  REQUIRE(vs.solution.status == dcv::SolveStatus::Converged);

  auto record = dcv::make_record(problem, vs);
  CHECK(record.mode == "vortex");
  CHECK(record.source_geometry == "hyperbolic");
  CHECK(record.target_geometry == "hyperbolic");
  CHECK(record.status == "converged");
  REQUIRE(record.c0.has_value());
  CHECK(*record.c0 == -1);
  REQUIRE(record.vortex_number.has_value());
  CHECK(*record.vortex_number == 1);
  REQUIRE(record.vertices.size() == static_cast<std::size_t>(mesh.surface->vertex_count()));
  REQUIRE(record.edges.size() == static_cast<std::size_t>(mesh.surface->edge_count()));

  auto json = dcv::to_json(record);
  auto parsed = dcv::parse_solution(json);

  CHECK(parsed.mode == record.mode);
  CHECK(parsed.source_geometry == record.source_geometry);
  CHECK(parsed.target_geometry == record.target_geometry);
  CHECK(parsed.status == record.status);
  CHECK(parsed.iterations == record.iterations);
  CHECK(parsed.final_grad_norm == record.final_grad_norm);
  CHECK(parsed.c0 == record.c0);
  CHECK(parsed.c == record.c);
  CHECK(parsed.vortex_number == record.vortex_number);
  REQUIRE(parsed.vertices.size() == record.vertices.size());
  for (std::size_t i = 0; i < record.vertices.size(); ++i) {
    const auto& a = record.vertices[i];
    const auto& b = parsed.vertices[i];
    CHECK(b.vertex == a.vertex);
    CHECK(b.u == a.u);
    CHECK(b.higgs_amplitude == a.higgs_amplitude);
    CHECK(b.theta_source == a.theta_source);
    CHECK(b.theta_target == a.theta_target);
    CHECK(b.theta_achieved == a.theta_achieved);
  }
  REQUIRE(parsed.edges.size() == record.edges.size());
  for (std::size_t i = 0; i < record.edges.size(); ++i) {
    const auto& a = record.edges[i];
    const auto& b = parsed.edges[i];
    CHECK(b.i == a.i);
    CHECK(b.j == a.j);
    CHECK(b.l_source == a.l_source);
    CHECK(b.l_baptista == a.l_baptista);
  }

  // Serialization is a fixpoint: emit, parse, emit again, byte-identical.
  CHECK(dcv::to_json(parsed) == json);

  // Dirichlet boundary vertices are pinned, so they carry no angle target;
  // interior vertices carry both target and achieved angle.
  dcv::VertexId boundary = mesh.surface->boundary_vertices().front();
  dcv::VertexId center = spec.vortices[0].first;
  CHECK_FALSE(record.vertices[boundary].theta_target.has_value());
  REQUIRE(record.vertices[center].theta_target.has_value());
  REQUIRE(record.vertices[center].theta_achieved.has_value());
  // Converged solve produced a target metric, so every edge has a mapped length.
  for (const auto& e : record.edges) CHECK(e.l_baptista.has_value());
}

TEST_CASE("solution csv has a fixed header and blank cells for absent values") {
  auto mesh = dcvtest::hex_fan();
  std::vector<double> targets(7, 0.0);
  targets[0] = dcv::cone_angles(dcv::DiscreteMetric::create(
      mesh.surface, dcv::Geometry::Euclidean, mesh.edge_lengths))[0];
  std::vector<std::pair<dcv::VertexId, double>> pins;
  for (dcv::VertexId v = 1; v < 7; ++v) pins.emplace_back(v, 0.0);
  auto problem = dcv::MappingProblem::create(
      dcv::DiscreteMetric::create(mesh.surface, dcv::Geometry::Euclidean, mesh.edge_lengths),
      dcv::Geometry::Euclidean, targets, pins);
  auto solution = dcv::solve(problem, problem.start_point());
  REQUIRE(solution.status == dcv::SolveStatus::Converged);

  auto record = dcv::make_record(problem, solution);
  auto csv = dcv::to_csv(record);
  REQUIRE(csv.rfind("vertex,u,higgs_amplitude,theta_source,theta_target,theta_achieved\n", 0) ==
          0);
  auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 7);

  // Row for pinned vertex 1: theta_target cell is empty, achieved is not.
  auto row_start = csv.find("\n1,") + 1;
  auto row = csv.substr(row_start, csv.find('\n', row_start) - row_start);
  auto cells = std::vector<std::string>{};
  std::istringstream row_in(row);
  for (std::string cell; std::getline(row_in, cell, ',');) cells.push_back(cell);
  REQUIRE(cells.size() >= 5);
  CHECK(cells[0] == "1");
  CHECK(cells[1] == "0");
  CHECK(cells[4].empty());
}

TEST_CASE("infeasible solve serializes null gradient norm and no mapped lengths") {
  auto m = dcvtest::octahedron(1.2);
  auto metric = dcv::DiscreteMetric::create(m.surface, dcv::Geometry::Spherical, m.lengths);
  auto targets = dcv::cone_angles(metric);
  auto problem = dcv::MappingProblem::create(metric, dcv::Geometry::Spherical, targets, {});
  // A large positive start pushes every chord past 1, which is infeasible.
  std::vector<double> u0(6, 3.0);
  auto solution = dcv::solve(problem, u0);
  REQUIRE(solution.status == dcv::SolveStatus::InfeasibleStart);

  auto record = dcv::make_record(problem, solution);
  auto json = dcv::to_json(record);
  CHECK(json.find("\"theta_achieved\": null") != std::string::npos);
  CHECK(json.find("\"l_baptista\": null") != std::string::npos);
  CHECK(json.find("\"c0\": null") != std::string::npos);

  auto parsed = dcv::parse_solution(json);
  CHECK(parsed.status == "infeasible_start");
  CHECK_FALSE(parsed.vertices[0].theta_achieved.has_value());
  CHECK_FALSE(parsed.edges[0].l_baptista.has_value());
  CHECK(dcv::to_json(parsed) == json);
}

TEST_CASE("solution parser rejects missing and unknown fields with a path") {
  using dcv::ErrorCode;
  const std::string good = R"({
    "format": "dcv-solution",
    "version": 1,
    "global": {"mode": "mapping", "source_geometry": "euclidean",
               "target_geometry": "euclidean", "status": "converged",
               "iterations": 0, "final_grad_norm": 0.0,
               "c0": null, "c": null, "vortex_number": null},
    "vertices": [{"vertex": 0, "u": 0.0, "higgs_amplitude": 1.0, "theta_source": 1.0,
                  "theta_target": null, "theta_achieved": null}],
    "edges": []
  })";
  CHECK(dcv::parse_solution(good).vertices.size() == 1);

  auto mutate = [&](const std::string& from, const std::string& to) {
    auto text = good;
    auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    return text;
  };
  auto code = [&](const std::string& text) {
    return thrown_code([&] { dcv::parse_solution(text); });
  };

  CHECK(code(mutate("dcv-solution", "other-format")) == ErrorCode::SchemaError);
  CHECK(code(mutate("\"version\": 1", "\"version\": 2")) == ErrorCode::SchemaError);
  CHECK(code(mutate("\"iterations\": 0,", "")) == ErrorCode::SchemaError);
  CHECK(code(mutate("\"u\": 0.0", "\"u\": \"zero\"")) == ErrorCode::SchemaError);
  CHECK(thrown_message([&] { dcv::parse_solution(mutate("\"u\": 0.0, ", "")); })
            .find("$.vertices[0]") != std::string::npos);
  CHECK(code(mutate("\"edges\": []", "\"edges\": [], \"extra\": 1")) == ErrorCode::SchemaError);
  CHECK(code(mutate("\"edges\": []", "\"edges\": {}")) == ErrorCode::SchemaError);
}

TEST_CASE("write_solution writes both files verbatim") {
  TempDir dir;
  auto mesh = dcvtest::square_grid(3);
  dcv::VortexSpec spec;
  spec.constants = dcv::preset_constants("bradlow");
  spec.vortices = {{dcvtest::nearest_vertex(mesh, 0.0, 0.0), 1}};
  auto problem = dcv::build_vortex_problem(mesh.surface, mesh.edge_lengths, spec);
  auto vs = dcv::solve_vortex(problem);
  auto record = dcv::make_record(problem, vs);

  dcv::write_solution(record, dir.path / "s.json", dir.path / "s.csv");
  CHECK(read_file(dir.path / "s.json") == dcv::to_json(record));
  CHECK(read_file(dir.path / "s.csv") == dcv::to_csv(record));

  CHECK(thrown_code([&] {
          dcv::write_solution(record, dir.path / "missing" / "s.json", dir.path / "s.csv");
        }) == dcv::ErrorCode::IoFailure);
}

TEST_CASE("cli validate reports admissibility through its exit code") {
  TempDir dir;
  auto grid = dcvtest::square_grid(4);
  auto mesh_path = (dir.path / "grid.obj").string();
  write_file(mesh_path, obj_text(grid));

  CHECK(run_cli({"validate", "--mesh", mesh_path}) == 0);
  CHECK(run_cli({"validate", "--mesh", mesh_path, "--geometry", "hyperbolic"}) == 0);
  // Scaling the quarter-unit edges up to ~2 keeps edges below pi but pushes
  // triangle perimeters past 2*pi, so the spherical check fails.
  CHECK(run_cli({"validate", "--mesh", mesh_path, "--geometry", "spherical", "--scale", "8"}) ==
        1);
  CHECK(run_cli({"validate", "--mesh", mesh_path, "--geometry", "round"}) == 1);
  CHECK(run_cli({"validate", "--mesh", (dir.path / "nope.obj").string()}) == 1);
}

TEST_CASE("cli usage errors exit with code 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"validate"}) == 2);
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("cli vortex and contour commands agree byte for byte") {
  TempDir dir;
  auto grid = dcvtest::square_grid(6);
  auto mesh_path = (dir.path / "grid.obj").string();
  write_file(mesh_path, obj_text(grid));

  auto center = dcvtest::nearest_vertex(grid, 0.0, 0.0);
  write_file(dir.path / "vortex.json",
             R"({"mode": "vortex", "preset": "taubes", "vortices": [{"vertex": )" +
                 std::to_string(center) + R"(, "n": 1}]})");

  auto out_dir = (dir.path / "out").string();
  REQUIRE(run_cli({"vortex", "--mesh", mesh_path, "--problem",
                   (dir.path / "vortex.json").string(), "--out", out_dir}) == 0);

  auto record = dcv::parse_solution(read_file(dir.path / "out" / "solution.json"));
  CHECK(record.mode == "vortex");
  CHECK(record.status == "converged");
  CHECK(record.vortex_number == std::optional<int>{1});
  REQUIRE(std::filesystem::exists(dir.path / "out" / "solution.csv"));

  auto svg = read_file(dir.path / "out" / "contours.svg");
  CHECK(svg.rfind("<svg", 0) == 0);

  // Re-rendering from the written solution reproduces the same SVG, which
  // checks that the 17-digit round trip loses nothing the renderer uses.
  REQUIRE(run_cli({"contour", "--solution", (dir.path / "out" / "solution.json").string(),
                   "--mesh", mesh_path, "--out", (dir.path / "again.svg").string()}) == 0);
  CHECK(read_file(dir.path / "again.svg") == svg);

  // Mode mismatch between problem file and subcommand is an error.
  CHECK(run_cli({"solve", "--mesh", mesh_path, "--problem",
                 (dir.path / "vortex.json").string(), "--out", out_dir}) == 1);
}

TEST_CASE("cli solve runs a mapping problem end to end") {
  TempDir dir;
  auto fan = dcvtest::hex_fan();
  auto mesh_path = (dir.path / "fan.obj").string();
  write_file(mesh_path, obj_text(fan));

  auto theta = dcv::cone_angles(
      dcv::DiscreteMetric::create(fan.surface, dcv::Geometry::Euclidean, fan.edge_lengths))[0];
  std::ostringstream problem;
  problem.precision(17);
  problem << R"({"mode": "mapping", "source_geometry": "euclidean",
                 "target_geometry": "euclidean", "theta_targets": {"0": )"
          << theta << R"(}, "pinned": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 0, "6": 0}})";
  write_file(dir.path / "mapping.json", problem.str());

  auto out_dir = (dir.path / "out").string();
  REQUIRE(run_cli({"solve", "--mesh", mesh_path, "--problem",
                   (dir.path / "mapping.json").string(), "--out", out_dir}) == 0);
  auto record = dcv::parse_solution(read_file(dir.path / "out" / "solution.json"));
  CHECK(record.mode == "mapping");
  CHECK(record.status == "converged");
  CHECK(record.vertices[0].u == 0.0);

  // A vertex with neither a target nor a pin is rejected at build time.
  write_file(dir.path / "partial.json",
             R"({"mode": "mapping", "source_geometry": "euclidean",
                 "target_geometry": "euclidean", "theta_targets": {"0": 6.28},
                 "pinned": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 0}})");
  CHECK(run_cli({"solve", "--mesh", mesh_path, "--problem",
                 (dir.path / "partial.json").string(), "--out", out_dir}) == 1);
}
