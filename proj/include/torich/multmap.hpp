#pragma once

// The l-times multiplication map of a toric variety at the level of
// monomial sections: φ(x^{m'} ⊗ ω) = x^{l m'} ⊗ ω and its splitting ψ.
// M' = lM is realized by the ×l / ÷l action on weights; the fan is reused.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torich/cohomology.hpp"

namespace torich {

struct MultiplicationContext {
  Int l = 2;
  /// Throws Error(kDegree) unless l >= 2.
  static MultiplicationContext make(Int l);
};

/// x^weight ⊗ omega over the chart U_chart; omega in Λ^a coordinates.
struct Section {
  std::size_t chart = 0;
  MVector weight;
  std::vector<Int> omega;
  friend bool operator==(const Section&, const Section&) = default;
};

Section phi(const MultiplicationContext& ctx, const Section& s);
/// φ with the target check: throws Error(kEmpty) if the image component of
/// `target` at (chart, l·m') is zero.
Section phi(const MultiplicationContext& ctx, const SheafModel& target, const Section& s);
/// (m/l, ω) if l divides m, else nullopt (the zero section).
std::optional<Section> psi(const MultiplicationContext& ctx, const Section& s);

using PsiFunction = std::function<std::optional<Section>(const MultiplicationContext&, const Section&)>;

struct MapCertificate {
  bool ok = true;
  std::size_t checks = 0;
  std::string witness;  // first failure, empty when ok
};

/// The split-injection property of φ/ψ for `spec` (twisted by L on the source
/// and L^l on the target) on every chart, over primed weights with
/// |m'| <= radius and target weights with |m| <= l * radius.
MapCertificate verify_split(const SheafSpec& spec, const MultiplicationContext& ctx, Int radius,
                            const FieldSpec& field, const PsiFunction& psi_fn = psi);

/// d∘φ = 0 and ψ∘d = 0 for every form degree of the family, in the given
/// field. Holds in characteristic l; over Q the witness records a failure.
MapCertificate verify_complex_morphism_char_p(const SheafSpec& family, const MultiplicationContext& ctx,
                                              Int radius, const FieldSpec& field);

/// [h^i(spec ⊗ L^{l^0}), ..., h^i(spec ⊗ L^{l^r})].
std::vector<Int> frobenius_dim_chain(const SheafSpec& spec, const CartierData& l_bundle, std::size_t i, Int l,
                                     std::size_t r, const FieldSpec& field, const BoxPolicy& policy = {});

/// Nondecreasing, hence a zero entry forces zeros before it.
bool chain_is_monotone(const std::vector<Int>& chain);

}  // namespace torich
