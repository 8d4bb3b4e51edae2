#pragma once

// Cones, finite fans, star-closed subsets (toric polyhedra), boundary
// divisors and Cartier data of torus-invariant line bundles.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torich/lattice.hpp"

namespace torich {

using RayMask = std::uint64_t;

// --- standalone cone geometry ----------------------------------------------

/// Generators of the dual cone {x : <g, x> >= 0 for all g}. Each generator is
/// primitive; a lineality space is returned as +/- pairs of its basis.
/// Double description (Motzkin) with the combinatorial adjacency test.
std::vector<MVector> dual_cone(std::size_t rank, std::span<const NVector> generators);
std::vector<NVector> dual_cone(std::size_t rank, std::span<const MVector> generators);

struct ConeFace {
  RayMask rays = 0;  // bit i = i-th generator of the cone
  MVector witness;   // face = cone ∩ witness^perp, witness in the dual cone
};

/// All faces of cone(generators), including {0} and the cone itself, ordered
/// by (dimension, mask). Throws Error(kNotCone) if the cone is not strongly
/// convex or a generator is not extremal.
std::vector<ConeFace> face_lattice(std::size_t rank, std::span<const NVector> generators);

/// x in cone whose dual is generated by `dual_generators`.
bool dual_contains(std::span<const MVector> dual_generators, const NVector& x);
bool dual_contains(std::span<const NVector> dual_generators, const MVector& x);

// --- fans ------------------------------------------------------------------

struct Cone {
  std::size_t id = 0;
  RayMask ray_mask = 0;
  std::vector<std::size_t> ray_ids;
  std::vector<NVector> generators;
  std::size_t dim = 0;
  std::vector<std::size_t> face_ids;   // includes {0} and the cone itself
  std::vector<MVector> dual_generators;
};

class Fan {
 public:
  /// validate_fan: builds the face closure of `cones` (ray-index lists) and
  /// certifies both fan axioms. Throws kNotCone / kFanAxiom.
  static Fan build(std::size_t rank, std::vector<NVector> rays, const std::vector<std::vector<std::size_t>>& cones);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<NVector>& rays() const noexcept { return rays_; }
  const std::vector<Cone>& cones() const noexcept { return cones_; }
  const Cone& cone(std::size_t id) const { return cones_.at(id); }
  std::size_t size() const noexcept { return cones_.size(); }
  const std::vector<std::size_t>& max_cones() const noexcept { return max_cones_; }
  std::size_t zero_cone() const noexcept { return 0; }

  std::optional<std::size_t> find(RayMask mask) const;
  std::optional<std::size_t> find(std::span<const std::size_t> ray_ids) const;
  /// Cone of a single ray.
  std::size_t ray_cone(std::size_t ray_id) const;
  /// sigma ∩ tau, again a cone of the fan.
  std::size_t intersect(std::size_t a, std::size_t b) const;
  /// delta ≺ gamma.
  bool is_face(std::size_t delta, std::size_t gamma) const {
    return (cones_[delta].ray_mask & ~cones_[gamma].ray_mask) == 0;
  }
  /// Position of `id` in max_cones(), if maximal.
  std::optional<std::size_t> max_index(std::size_t id) const;

  /// Independent re-check of both axioms on every cone pair.
  bool certify(std::string* failure = nullptr) const;

 private:
  std::size_t rank_ = 0;
  std::vector<NVector> rays_;
  std::vector<Cone> cones_;
  std::vector<std::size_t> max_cones_;
};

bool is_complete(const Fan& fan);
bool is_smooth(const Fan& fan, std::size_t cone_id);
bool is_simplicial(const Fan& fan, std::size_t cone_id);

// --- star-closed sets ------------------------------------------------------

class StarSet {
 public:
  StarSet(std::shared_ptr<const Fan> fan, std::vector<bool> members);

  const Fan& fan() const { return *fan_; }
  const std::shared_ptr<const Fan>& fan_ptr() const { return fan_; }
  bool contains(std::size_t id) const { return members_[id]; }
  const std::vector<bool>& members() const { return members_; }
  std::vector<std::size_t> ids() const;
  bool is_everything() const;
  /// Minimal members; V(sigma) for these are the irreducible components.
  std::vector<std::size_t> components() const;
  /// Dimensions n - dim(sigma) of the components, sorted descending.
  std::vector<std::size_t> component_dimensions() const;
  bool is_pure() const;

 private:
  std::shared_ptr<const Fan> fan_;
  std::vector<bool> members_;
};

/// Throws Error(kStar) with a witness pair (sigma in Phi, tau not in Phi, sigma ≺ tau).
StarSet validate_star_set(std::shared_ptr<const Fan> fan, std::span<const std::size_t> ids);
/// Phi_m = {sigma : dim sigma >= m}.
StarSet skeleton_star_set(std::shared_ptr<const Fan> fan, std::size_t m);
StarSet whole_fan(std::shared_ptr<const Fan> fan);

// --- boundary divisors -----------------------------------------------------

struct BoundaryData {
  std::vector<std::size_t> a;  // ray ids with zeros
  std::vector<std::size_t> b;  // ray ids with log poles only
};

/// Throws Error(kBoundary) if A and B share a ray or reference missing rays.
BoundaryData validate_boundary(const Fan& fan, std::vector<std::size_t> a, std::vector<std::size_t> b);

// --- Cartier data ----------------------------------------------------------

/// sigma -> m_sigma on maximal cones, with Gamma(U_sigma, L)_m != 0 iff
/// m - m_sigma in sigma^dual.
class CartierData {
 public:
  CartierData(std::shared_ptr<const Fan> fan, std::vector<MVector> data);

  const Fan& fan() const { return *fan_; }
  const std::shared_ptr<const Fan>& fan_ptr() const { return fan_; }
  /// Indexed like fan().max_cones().
  const std::vector<MVector>& data() const { return data_; }
  /// Datum of the first maximal cone containing `cone_id`.
  const MVector& anchor(std::size_t cone_id) const { return data_[anchor_index_[cone_id]]; }

  CartierData tensor(const CartierData& other) const;
  CartierData power(Int k) const;
  static CartierData trivial(std::shared_ptr<const Fan> fan);
  bool is_trivial() const;
  Int max_abs_coordinate() const;

  friend bool operator==(const CartierData& a, const CartierData& b) { return a.data_ == b.data_; }

 private:
  std::shared_ptr<const Fan> fan_;
  std::vector<MVector> data_;
  std::vector<std::size_t> anchor_index_;
};

/// Certifies face compatibility on every pair of maximal cones. Throws kCartier.
CartierData cartier_validate(std::shared_ptr<const Fan> fan, std::vector<MVector> data);
/// T-Cartier data of the Weil divisor sum(coeffs[i] * D_i). Throws kCartier
/// if it is not Cartier.
CartierData cartier_from_divisor(std::shared_ptr<const Fan> fan, std::span<const Int> coeffs);
/// Strict convexity across every wall. False on non-complete fans.
bool is_ample(const CartierData& l);
/// Lattice points m with m - m_sigma in sigma^dual for all maximal sigma.
/// Throws Error(kUnbounded) if the fan is not complete.
std::vector<MVector> polytope_points(const CartierData& l);

/// f^*L for a refinement: each source maximal cone inherits the datum of the
/// first target maximal cone containing it.
CartierData pull_back(const CartierData& l, std::shared_ptr<const Fan> source);

}  // namespace torich
