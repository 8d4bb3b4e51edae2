#pragma once

// Weight-graded models of the sheaves on torus-invariant affine charts.
//
// Every section space is realized inside k[M] ⊗ Λ^a(M ⊗ k): the weight-m part
// of a sheaf on the chart U_γ is a subspace of Λ^a(k^n), stored as integer
// generator rows in the lexicographic wedge basis. Restrictions between charts
// are inclusions of these subspaces (or zero when the target vanishes).

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "torich/fan.hpp"
#include "torich/field.hpp"
#include "torich/linalg.hpp"

namespace torich {

enum class SheafKind { kStructureOnY, kIdealOfY, kIshidaForms, kLogForms };

class SheafSpec {
 public:
  static SheafSpec structure_on(StarSet phi);
  static SheafSpec ideal_of(StarSet phi);
  /// Ishida's Ω̃^a_Y; with Phi = the whole fan this is Danilov's Ω̃^a_X.
  static SheafSpec ishida_forms(StarSet phi, std::size_t degree);
  static SheafSpec danilov_forms(std::shared_ptr<const Fan> fan, std::size_t degree);
  /// Ω̃^a_X(log(A+B))(-A).
  static SheafSpec log_forms(std::shared_ptr<const Fan> fan, BoundaryData boundary, std::size_t degree);

  /// Twists by L; an existing twist is tensored with L.
  SheafSpec twisted(const CartierData& l) const;
  SheafSpec untwisted() const;
  /// Same family in another form degree (structure/ideal sheaves only have degree 0).
  SheafSpec with_degree(std::size_t degree) const;

  SheafKind kind() const noexcept { return kind_; }
  std::size_t degree() const noexcept { return degree_; }
  const Fan& fan() const { return *fan_; }
  const std::shared_ptr<const Fan>& fan_ptr() const { return fan_; }
  const std::optional<StarSet>& phi() const noexcept { return phi_; }
  const std::optional<BoundaryData>& boundary() const noexcept { return boundary_; }
  const std::optional<CartierData>& twist() const noexcept { return twist_; }
  /// O_Y and Ishida forms on a proper polyhedron live on Y, not X.
  bool supported_on_polyhedron() const;
  /// Families with a de Rham differential (Ishida and log forms).
  bool has_de_rham() const { return kind_ == SheafKind::kIshidaForms || kind_ == SheafKind::kLogForms; }

  std::string describe() const;

 private:
  SheafSpec(SheafKind kind, std::shared_ptr<const Fan> fan) : kind_(kind), fan_(std::move(fan)) {}

  SheafKind kind_;
  std::shared_ptr<const Fan> fan_;
  std::size_t degree_ = 0;
  std::optional<StarSet> phi_;
  std::optional<BoundaryData> boundary_;
  std::optional<CartierData> twist_;
};

struct WeightComponent {
  std::size_t chart = 0;
  MVector weight;
  std::size_t degree = 0;
  IntMatrix basis;  // independent rows in Λ^degree(k^n), entries read in the field
  std::size_t dim() const { return basis.rows(); }
};

/// Precomputed chart tables for one (spec, field). All queries are const and
/// safe to call concurrently.
class SheafModel {
 public:
  SheafModel(SheafSpec spec, FieldSpec field);

  const SheafSpec& spec() const noexcept { return spec_; }
  const FieldSpec& field() const noexcept { return field_; }
  const Fan& fan() const { return spec_.fan(); }
  std::size_t ambient_dim() const noexcept { return ambient_dim_; }

  /// Generator rows of the weight-m sections over U_γ (m is the total weight,
  /// twists already accounted for).
  IntMatrix component(std::size_t chart, const MVector& m) const;
  WeightComponent weight_component(std::size_t chart, const MVector& m) const;

 private:
  IntMatrix untwisted_component(std::size_t chart, const MVector& m) const;
  IntMatrix compute_component(std::size_t chart, const MVector& m) const;
  IntMatrix log_component_smooth(std::size_t chart, const MVector& m) const;
  std::size_t face_id(RayMask mask) const { return face_index_.at(mask); }

  SheafSpec spec_;
  FieldSpec field_;
  std::size_t ambient_dim_ = 0;
  std::unordered_map<RayMask, std::size_t> face_index_;
  // Ishida: Λ^a(M[face]) per cone id.
  std::vector<IntMatrix> perp_wedges_;
  // Log forms: smooth flag, wedge rows u_S of the adapted dual basis, and the
  // maximal smooth faces of every cone.
  std::vector<bool> smooth_;
  std::vector<IntMatrix> adapted_wedges_;
  std::vector<std::vector<std::size_t>> max_smooth_faces_;
  RayMask a_mask_ = 0;
  RayMask b_mask_ = 0;
  // Components keyed by (chart, signs of <v_i, m> over the chart's rays).
  struct ComponentCache {
    std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, IntMatrix> map;
  };
  std::shared_ptr<ComponentCache> cache_ = std::make_shared<ComponentCache>();
};

/// Weight-m sections of `spec` over the chart U_γ. Throws Error(kChart).
WeightComponent chart_weight_component(const SheafSpec& spec, std::size_t chart, const MVector& m,
                                       const FieldSpec& field);

/// Matrix (rows = source basis, columns = target basis) of the restriction
/// from U_γ to U_δ at weight m. Throws Error(kNotFace) unless δ ≺ γ.
FieldMatrix restriction_map(const SheafSpec& spec, std::size_t from, std::size_t to, const MVector& m,
                            const FieldSpec& field);
FieldMatrix restriction_map(const SheafModel& model, std::size_t from, std::size_t to, const MVector& m);

/// d(x^m ⊗ ω) = x^m ⊗ (m ∧ ω); ω given in Λ^a coordinates, result in Λ^{a+1}
/// reduced into the field. Empty for a = n.
std::vector<Int> exterior_derivative(const MVector& m, std::span<const Int> omega, std::size_t degree,
                                     const FieldSpec& field);

/// Matrix of ω ↦ m ∧ ω from Λ^a to Λ^{a+1} (rows indexed by Λ^a).
IntMatrix wedge_operator(const MVector& m, std::size_t rank, std::size_t degree);

/// Rows of `rows` reduced into the field (identity over Q).
IntMatrix reduce_into(const IntMatrix& rows, const FieldSpec& field);

}  // namespace torich
