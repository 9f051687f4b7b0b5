#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dcv/vortex.hpp"

namespace dcv {

/// Mapping-mode problem inputs as read from JSON. Edge lengths are optional:
/// when absent, the metric comes from the mesh embedding.
struct MappingSpec {
  Geometry source_geometry = Geometry::Euclidean;
  Geometry target_geometry = Geometry::Euclidean;
  std::vector<std::pair<VertexId, double>> theta_targets;
  std::vector<std::pair<VertexId, double>> pinned;
  std::vector<std::tuple<VertexId, VertexId, double>> lengths;
};

struct ProblemSpec {
  std::string mode;  // "vortex" | "mapping"
  std::optional<VortexSpec> vortex;
  std::optional<MappingSpec> mapping;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) schema_fail(path + "." + key, "unknown field");
  }
}

inline const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  const json* p = find(obj, key);
  if (!p) schema_fail(path + "." + key, "required field is missing");
  return *p;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

inline long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<long>();
}

inline std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

inline VertexId vertex_key(const std::string& key, const std::string& path) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
  if (ec != std::errc() || ptr != key.data() + key.size() || value < 0)
    schema_fail(path, "key \"" + key + "\" is not a vertex id");
  return static_cast<VertexId>(value);
}

// {"vertex id": number, ...} with distinct integer keys, ascending output.
inline std::vector<std::pair<VertexId, double>> vertex_map_at(const json& j,
                                                              const std::string& path) {
  require_object(j, path);
  std::vector<std::pair<VertexId, double>> out;
  out.reserve(j.size());
  for (const auto& [key, value] : j.items())
    out.emplace_back(vertex_key(key, path + "." + key), number_at(value, path + "." + key));
  std::sort(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].first == out[i - 1].first)
      schema_fail(path, "vertex " + std::to_string(out[i].first) + " appears twice");
  return out;
}

inline Geometry geometry_at(const json& j, const std::string& path) {
  auto name = string_at(j, path);
  if (name == "euclidean") return Geometry::Euclidean;
  if (name == "hyperbolic") return Geometry::Hyperbolic;
  if (name == "spherical") return Geometry::Spherical;
  schema_fail(path, "expected \"euclidean\", \"hyperbolic\", or \"spherical\"");
}

inline VortexSpec parse_vortex_fields(const json& root) {
  reject_unknown_keys(root, "$", {"mode", "preset", "constants", "vortices", "boundary", "scale"});

  VortexSpec spec;
  const json* preset = find(root, "preset");
  const json* constants = find(root, "constants");
  if (preset && constants) schema_fail("$.constants", "give either preset or constants, not both");
  if (!preset && !constants) schema_fail("$", "vortex mode requires preset or constants");
  if (preset) {
    spec.constants = preset_constants(string_at(*preset, "$.preset"));
  } else {
    require_object(*constants, "$.constants");
    reject_unknown_keys(*constants, "$.constants", {"c0", "c"});
    spec.constants.c0 =
        static_cast<int>(integer_at(require(*constants, "c0", "$.constants"), "$.constants.c0"));
    spec.constants.c =
        static_cast<int>(integer_at(require(*constants, "c", "$.constants"), "$.constants.c"));
    check_constants(spec.constants);
  }

  const json& vort = require(root, "vortices", "$");
  if (!vort.is_array()) schema_fail("$.vortices", "expected an array");
  for (std::size_t i = 0; i < vort.size(); ++i) {
    const std::string path = "$.vortices[" + std::to_string(i) + "]";
    require_object(vort[i], path);
    reject_unknown_keys(vort[i], path, {"vertex", "n"});
    long v = integer_at(require(vort[i], "vertex", path), path + ".vertex");
    long n = integer_at(require(vort[i], "n", path), path + ".n");
    if (v < 0) schema_fail(path + ".vertex", "vertex id must be nonnegative");
    spec.vortices.emplace_back(static_cast<VertexId>(v), static_cast<int>(n));
  }

  if (const json* b = find(root, "boundary")) {
    auto name = string_at(*b, "$.boundary");
    if (name == "dirichlet_zero")
      spec.boundary_condition = BoundaryCondition::DirichletZero;
    else if (name == "free")
      spec.boundary_condition = BoundaryCondition::Free;
    else
      schema_fail("$.boundary", "expected \"dirichlet_zero\" or \"free\"");
  }
  if (const json* s = find(root, "scale")) spec.length_scale = number_at(*s, "$.scale");
  return spec;
}

inline MappingSpec parse_mapping_fields(const json& root) {
  reject_unknown_keys(root, "$", {"mode", "source_geometry", "target_geometry", "theta_targets",
                                  "pinned", "lengths"});

  MappingSpec spec;
  spec.source_geometry = geometry_at(require(root, "source_geometry", "$"), "$.source_geometry");
  spec.target_geometry = geometry_at(require(root, "target_geometry", "$"), "$.target_geometry");

  spec.theta_targets = vertex_map_at(require(root, "theta_targets", "$"), "$.theta_targets");
  if (const json* p = find(root, "pinned")) spec.pinned = vertex_map_at(*p, "$.pinned");

  for (const auto& [v, angle] : spec.theta_targets) {
    for (const auto& [w, u] : spec.pinned)
      if (v == w)
        schema_fail("$.pinned", "vertex " + std::to_string(v) + " both pinned and angle-targeted");
  }

  if (const json* l = find(root, "lengths")) {
    require_object(*l, "$.lengths");
    for (const auto& [key, value] : l->items()) {
      const std::string path = "$.lengths." + key;
      auto dash = key.find('-');
      if (dash == std::string::npos) schema_fail(path, "key must be \"i-j\"");
      VertexId a = vertex_key(key.substr(0, dash), path);
      VertexId b = vertex_key(key.substr(dash + 1), path);
      if (a >= b) schema_fail(path, "key must name a canonical pair i < j");
      spec.lengths.emplace_back(a, b, number_at(value, path));
    }
    std::sort(spec.lengths.begin(), spec.lengths.end());
  }
  return spec;
}

}  // namespace detail

/// Parses and validates a problem file. The schema is strict: unknown
/// fields, wrong types, malformed vertex keys, and invalid constant pairs
/// are all rejected with a JSON path; semantic checks that need the mesh
/// (index ranges, admissibility, solvability) happen at build time.
inline ProblemSpec parse_problem(const std::string& text) {
  detail::json root;
  try {
    root = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("$: ") + e.what());
  }
  detail::require_object(root, "$");

  ProblemSpec spec;
  spec.mode = detail::string_at(detail::require(root, "mode", "$"), "$.mode");
  if (spec.mode == "vortex")
    spec.vortex = detail::parse_vortex_fields(root);
  else if (spec.mode == "mapping")
    spec.mapping = detail::parse_mapping_fields(root);
  else
    detail::schema_fail("$.mode", "expected \"vortex\" or \"mapping\"");
  return spec;
}

}  // namespace dcv
