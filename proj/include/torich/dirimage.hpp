#pragma once

// Higher direct images along subdivisions f: Z -> X. Over an invariant affine
// U_τ of the base, Γ(U_τ, R^j f_* F) = H^j(f^{-1}U_τ, F), computed per weight
// from the Čech complex of the source cones lying in τ.

#include <optional>
#include <span>
#include <vector>

#include "torich/cohomology.hpp"

namespace torich {

class FanMorphism {
 public:
  const std::shared_ptr<const Fan>& source() const noexcept { return source_; }
  const std::shared_ptr<const Fan>& target() const noexcept { return target_; }
  /// Smallest target cone containing the source cone.
  std::size_t image_cone(std::size_t source_cone) const { return image_.at(source_cone); }
  /// Maximal source cones contained in the target cone, in id order.
  const std::vector<std::size_t>& fiber_cover(std::size_t target_cone) const { return fibers_.at(target_cone); }
  bool is_identity() const noexcept { return identity_; }

 private:
  friend FanMorphism validate_fan_morphism(std::shared_ptr<const Fan>, std::shared_ptr<const Fan>,
                                           const std::optional<IntMatrix>&);
  std::shared_ptr<const Fan> source_;
  std::shared_ptr<const Fan> target_;
  std::vector<std::size_t> image_;
  std::vector<std::vector<std::size_t>> fibers_;
  bool identity_ = false;
};

/// Certifies that every source cone lies in a target cone and that the
/// supports agree (each target cone is tiled by source cones). Only the
/// identity lattice map is supported. Throws Error(kNotCompatible).
FanMorphism validate_fan_morphism(std::shared_ptr<const Fan> source, std::shared_ptr<const Fan> target,
                                  const std::optional<IntMatrix>& lattice_map = std::nullopt);

struct RelativeCohomology {
  std::size_t base_cone = 0;
  CechCover cover;
  MVector weight;
  BlockComplex complex{FieldSpec::rationals()};
  std::vector<FieldMatrix> basis;         // per degree: cocycle representatives (ambient coordinates)
  std::vector<FieldMatrix> coboundaries;  // per degree: row basis of the coboundaries
  std::vector<std::size_t> dims() const;
};

/// H^j(f^{-1}(U_τ), F) at weight m for τ = ∩ base_charts, with bases.
RelativeCohomology relative_cohomology(const FanMorphism& f, const SheafModel& source_model,
                                       std::span<const std::size_t> base_charts, const MVector& m);

/// Restriction H^j(f^{-1}U_from) -> H^j(f^{-1}U_to) for to.base_cone ≺ from.base_cone,
/// rows = basis of the source space, columns = basis of the target space.
FieldMatrix induced_map(const FanMorphism& f, const RelativeCohomology& from, const RelativeCohomology& to,
                        std::size_t degree);

struct DirectImageTable {
  std::vector<std::vector<Int>> h;  // h[j][i] = h^i(X, L ⊗ R^j f_* F)
  WeightCertificate certificate;
  FieldSpec field = FieldSpec::rationals();
  /// sum_j (-1)^j sum_i (-1)^i h[j][i].
  Int euler_characteristic() const;
};

/// h^i(X, L ⊗ R^j f_* spec) for all i, j. Requires a complete target fan.
DirectImageTable twisted_direct_image_cohomology(const FanMorphism& f, const SheafSpec& spec, const CartierData& l,
                                                 const FieldSpec& field, const BoxPolicy& policy = {});

}  // namespace torich
