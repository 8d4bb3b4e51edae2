#include "torich/cohomology.hpp"

#include "torich/error.hpp"

namespace torich {

namespace {

void require_bounded(const Fan& fan, const BoxPolicy& policy) {
  if (!is_complete(fan) && !policy.explicit_radius)
    throw Error(ErrorCode::kUnbounded, "cohomology of a non-complete fan needs an explicit weight box");
}

// Drop trailing zeros beyond `keep` entries.
std::vector<Int> trimmed(std::vector<Int> v, std::size_t keep) {
  while (v.size() > keep && v.back() == 0) v.pop_back();
  v.resize(std::max(v.size(), keep), 0);
  return v;
}

}  // namespace

CechKernel::CechKernel(const SheafSpec& spec, const FieldSpec& field, std::optional<CechCover> cover)
    : model_(spec, field), nerve_(spec.fan(), cover ? std::move(*cover) : default_cover(spec)) {}

std::vector<Int> CechKernel::operator()(const MVector& m) const {
  const auto components = nerve_components(model_, nerve_, m);
  const auto h = cech_cohomology(model_.field(), nerve_, components, memo_.get());
  std::vector<Int> out(width(), 0);
  Int chi = 0;
  for (std::size_t p = 0; p < h.size(); ++p) {
    out[p] = static_cast<Int>(h[p]);
    // Chain-level Euler characteristic, independent of the ranks.
    for (auto s : nerve_.simplices(p)) chi += (p % 2 ? -1 : 1) * static_cast<Int>(components[nerve_.cone_of(s)].rows());
  }
  out.back() = chi;
  return out;
}

HyperKernel::HyperKernel(const SheafSpec& family, const FieldSpec& field, std::optional<CechCover> cover)
    : nerve_(family.fan(), cover ? std::move(*cover) : default_cover(family)) {
  if (!family.has_de_rham()) throw Error(ErrorCode::kDegree, "hypercohomology needs a family of differential forms");
  if (family.twist()) throw Error(ErrorCode::kDegree, "the de Rham differential does not act on twisted forms");
  for (std::size_t a = 0; a <= family.fan().rank(); ++a) {
    models_.emplace_back(family.with_degree(a), field);
    memos_.push_back(std::make_shared<CechMemo>());
  }
}

std::vector<Int> HyperKernel::operator()(const MVector& m) const {
  std::vector<Int> out(width(), 0);
  bool any = false;
  const std::size_t c = cech_length();
  for (std::size_t a = 0; a < models_.size(); ++a) {
    const auto h = cech_cohomology(models_[a].field(), nerve_, nerve_components(models_[a], nerve_, m),
                                   memos_[a].get());
    for (auto v : h) any = any || v != 0;
    for (std::size_t b = 0; b < h.size(); ++b) out[a * c + b] = static_cast<Int>(h[b]);
  }
  if (!any) return out;
  const BlockComplex total = total_blocks(models_, nerve_, m);
  const auto h = total.cohomology();
  for (std::size_t k = 0; k < h.size(); ++k) out[form_degrees() * c + k] = static_cast<Int>(h[k]);
  return out;
}

Int CohomologyTable::euler_characteristic() const {
  Int chi = 0;
  for (std::size_t i = 0; i < h.size(); ++i) chi += (i % 2 ? -1 : 1) * h[i];
  return chi;
}

std::vector<Int> HypercohomologyTable::e1_diagonals() const {
  std::vector<Int> out(hyper.size(), 0);
  for (std::size_t a = 0; a < e1.size(); ++a)
    for (std::size_t b = 0; b < e1[a].size(); ++b) {
      if (a + b >= out.size()) out.resize(a + b + 1, 0);
      out[a + b] += e1[a][b];
    }
  return out;
}

CohomologyTable sheaf_cohomology(const SheafSpec& spec, const FieldSpec& field, const BoxPolicy& policy,
                                 std::optional<CechCover> cover) {
  require_bounded(spec.fan(), policy);
  const CechKernel kernel(spec, field, std::move(cover));
  const StabilizedSum s =
      stabilized_sum(spec.fan().rank(), default_initial_radius(spec.fan(), spec.twist()), policy, kernel.width(),
                     [&](const MVector& m) { return kernel(m); });
  CohomologyTable out;
  out.h = trimmed(std::vector<Int>(s.totals.begin(), s.totals.end() - 1), spec.fan().rank() + 1);
  out.chi_weightwise = s.totals.back();
  out.certificate = s.certificate;
  out.field = field;
  return out;
}

HypercohomologyTable hypercohomology(const SheafSpec& family, const FieldSpec& field, const BoxPolicy& policy,
                                     std::optional<CechCover> cover) {
  require_bounded(family.fan(), policy);
  const HyperKernel kernel(family, field, std::move(cover));
  const StabilizedSum s =
      stabilized_sum(family.fan().rank(), default_initial_radius(family.fan(), family.twist()), policy,
                     kernel.width(), [&](const MVector& m) { return kernel(m); });
  const std::size_t n = family.fan().rank();
  const std::size_t c = kernel.cech_length();
  HypercohomologyTable out;
  for (std::size_t a = 0; a < kernel.form_degrees(); ++a)
    out.e1.push_back(trimmed(std::vector<Int>(s.totals.begin() + a * c, s.totals.begin() + (a + 1) * c), n + 1));
  out.hyper = trimmed(std::vector<Int>(s.totals.begin() + kernel.form_degrees() * c, s.totals.end()), 2 * n + 1);
  out.certificate = s.certificate;
  out.field = field;
  return out;
}

SheafSpec line_bundle_spec(const CartierData& l) {
  return SheafSpec::structure_on(whole_fan(l.fan_ptr())).twisted(l);
}

EulerCheck euler_crosscheck(const CartierData& l, const FieldSpec& field, const BoxPolicy& policy) {
  EulerCheck out;
  const CohomologyTable t = sheaf_cohomology(line_bundle_spec(l), field, policy);
  out.h = t.h;
  out.chi_table = t.euler_characteristic();
  out.chi_weightwise = t.chi_weightwise;
  out.ok = out.chi_table == out.chi_weightwise;
  if (!out.ok) out.detail = "table chi " + std::to_string(out.chi_table) + " != weightwise chi " + std::to_string(out.chi_weightwise);
  if (is_ample(l)) {
    out.polytope_points = polytope_points(l).size();
    const Int pts = static_cast<Int>(*out.polytope_points);
    if (t.h.front() != pts) {
      out.ok = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("h0 ") + std::to_string(t.h.front()) +
                    " != #points " + std::to_string(pts);
    }
    if (out.chi_table != pts) {
      out.ok = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("chi ") + std::to_string(out.chi_table) +
                    " != #points " + std::to_string(pts);
    }
  }
  return out;
}

}  // namespace torich
