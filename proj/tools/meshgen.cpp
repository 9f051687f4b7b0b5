// Writes the sample meshes used by the demo problems as OBJ files.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "meshes.hpp"

namespace {

void write_obj(const dcv::EmbeddedMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[64];
  auto put = [&](double v) {
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out << ' ';
    out.write(buf, r.ptr - buf);
  };
  for (const auto& p : mesh.positions) {
    out << 'v';
    put(p[0]);
    put(p[1]);
    put(p[2]);
    out << '\n';
  }
  for (const auto& f : mesh.surface->faces())
    out << 'f' << ' ' << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate sample triangle meshes (OBJ)"};
  std::string kind;
  std::string out_path;
  int n = 40;
  int rings = 24;
  int subdivisions = 1;
  double radius = 4.0;
  app.add_option("--kind", kind, "square | disk | hex | icosphere")
      ->required()
      ->check(CLI::IsMember({"square", "disk", "hex", "icosphere"}));
  app.add_option("--out", out_path, "output OBJ path")->required();
  app.add_option("--n", n, "grid cells per side (square)");
  app.add_option("--rings", rings, "concentric rings (disk)");
  app.add_option("--radius", radius, "disk radius");
  app.add_option("--subdivisions", subdivisions, "icosphere subdivision rounds");
  CLI11_PARSE(app, argc, argv);

  try {
    dcv::EmbeddedMesh mesh;
    if (kind == "square")
      mesh = dcvtest::square_grid(n);
    else if (kind == "disk")
      mesh = dcvtest::disk_lattice(rings, radius);
    else if (kind == "hex")
      mesh = dcvtest::hex_fan();
    else
      mesh = dcvtest::icosphere(subdivisions);
    write_obj(mesh, out_path);
    std::cout << out_path << ": " << mesh.surface->vertex_count() << " vertices, "
              << mesh.surface->face_count() << " faces\n";
  } catch (const std::exception& e) {
    std::cerr << "meshgen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
