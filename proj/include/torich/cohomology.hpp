#pragma once

// Sheaf cohomology and de Rham hypercohomology tables, summed weight by
// weight over a stabilized box.

#include <optional>
#include <string>
#include <vector>

#include "torich/complex.hpp"
#include "torich/weights.hpp"

namespace torich {

/// Per-weight Čech dimensions: h^0..h^{c-1} followed by the Euler
/// characteristic of the weight-m complex.
class CechKernel {
 public:
  CechKernel(const SheafSpec& spec, const FieldSpec& field, std::optional<CechCover> cover = {});
  std::size_t width() const { return nerve_.size() + 1; }
  std::vector<Int> operator()(const MVector& m) const;
  const SheafModel& model() const noexcept { return model_; }
  const CechNerve& nerve() const noexcept { return nerve_; }

 private:
  SheafModel model_;
  CechNerve nerve_;
  std::shared_ptr<CechMemo> memo_ = std::make_shared<CechMemo>();
};

/// Per-weight E1 (h^b of each form degree a) and total complex dimensions for
/// a de Rham family with form degrees 0..n.
class HyperKernel {
 public:
  HyperKernel(const SheafSpec& family, const FieldSpec& field, std::optional<CechCover> cover = {});
  std::size_t form_degrees() const { return models_.size(); }
  std::size_t cech_length() const { return nerve_.size(); }
  std::size_t total_length() const { return nerve_.size() + models_.size() - 1; }
  std::size_t width() const { return form_degrees() * cech_length() + total_length(); }
  std::vector<Int> operator()(const MVector& m) const;

 private:
  std::vector<SheafModel> models_;
  CechNerve nerve_;
  std::vector<std::shared_ptr<CechMemo>> memos_;
};

struct CohomologyTable {
  std::vector<Int> h;
  Int chi_weightwise = 0;  // sum over weights of the per-weight Euler characteristic
  WeightCertificate certificate;
  FieldSpec field = FieldSpec::rationals();
  Int euler_characteristic() const;
};

struct HypercohomologyTable {
  std::vector<std::vector<Int>> e1;  // e1[a][b] = h^b(Ω^a)
  std::vector<Int> hyper;            // dim ℍ^k
  WeightCertificate certificate;
  FieldSpec field = FieldSpec::rationals();
  /// sum_{a+b=k} e1[a][b] per k.
  std::vector<Int> e1_diagonals() const;
  bool degenerates() const { return e1_diagonals() == hyper; }
};

/// Throws Error(kUnbounded) on a non-complete fan unless an explicit box is
/// given; Error(kNoStabilize) if the box sums do not settle.
CohomologyTable sheaf_cohomology(const SheafSpec& spec, const FieldSpec& field, const BoxPolicy& policy = {},
                                 std::optional<CechCover> cover = {});

/// `family` fixes the sheaf type; its own form degree is ignored and all
/// degrees 0..n are used.
HypercohomologyTable hypercohomology(const SheafSpec& family, const FieldSpec& field, const BoxPolicy& policy = {},
                                     std::optional<CechCover> cover = {});

struct EulerCheck {
  Int chi_table = 0;
  Int chi_weightwise = 0;
  std::vector<Int> h;
  std::optional<std::size_t> polytope_points;  // set for ample L
  bool ok = false;
  std::string detail;
};

/// Euler characteristic of L two ways and, for ample L, h^0 = #points of the
/// section polytope.
EulerCheck euler_crosscheck(const CartierData& l, const FieldSpec& field, const BoxPolicy& policy = {});

/// O_X ⊗ L.
SheafSpec line_bundle_spec(const CartierData& l);

}  // namespace torich
