#pragma once

// Suite runners: each restates a theorem as exact checks on a scene.

#include <optional>
#include <string_view>

#include "torich/report.hpp"
#include "torich/scene.hpp"

namespace torich {

enum class Suite { kVanishing, kE1, kExtension, kKollar, kMultiplication };

/// Throws Error(kParse) for unknown names.
Suite parse_suite(std::string_view name);
std::string_view suite_name(Suite suite);

struct SuiteOptions {
  BoxPolicy policy;
  std::optional<FieldSpec> field;  // replaces the scene's field list
};

/// Throws Error(kMissingIngredient) naming the absent scene field.
Report run_suite(const Scene& scene, Suite suite, const SuiteOptions& options = {});

/// First weight of the box of radius r with nonzero per-weight h^i, if any.
std::optional<MVector> cohomology_witness(const SheafSpec& spec, const FieldSpec& field, std::size_t i, Int r);

}  // namespace torich
