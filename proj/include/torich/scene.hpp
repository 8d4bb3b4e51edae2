#pragma once

// Scene files: a fan with optional polyhedron, boundary configurations, line
// bundles, a subdivision morphism and the coefficient fields to run over.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torich/dirimage.hpp"

namespace torich {

struct NamedBundle {
  std::string name;
  CartierData bundle;
};

/// The scene fan Z maps to `target` X; bundles here live on X.
struct SceneMorphism {
  std::shared_ptr<const Fan> target;
  FanMorphism map;
  std::vector<NamedBundle> line_bundles;
};

struct SceneTasks {
  Int split_radius = 4;
  std::vector<Int> multipliers{2, 3, 5};
  std::vector<Int> chain_bases{2, 3};
  std::size_t chain_length = 2;
};

struct Scene {
  std::string name;
  std::string digest;  // FNV-1a 64 of the canonical JSON, hex
  std::shared_ptr<const Fan> fan;
  std::optional<StarSet> phi;
  std::vector<BoundaryData> boundaries;
  std::vector<NamedBundle> line_bundles;
  std::optional<SceneMorphism> morphism;
  std::vector<FieldSpec> fields;
  SceneTasks tasks;

  /// Φ if given, else the whole fan.
  StarSet polyhedron() const;
};

/// Errors carry the JSON pointer of the offending value: kParse, kNotCone,
/// kFanAxiom, kStar, kCartier, kBoundary, kField, kNotCompatible.
Scene parse_scene(std::string_view text, std::string name);
Scene load_scene(const std::filesystem::path& path);

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace torich
