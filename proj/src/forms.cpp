#include "torich/forms.hpp"

#include <mutex>
#include <stdexcept>

#include "torich/error.hpp"

namespace torich {

// --- SheafSpec -------------------------------------------------------------

SheafSpec SheafSpec::structure_on(StarSet phi) {
  SheafSpec s(SheafKind::kStructureOnY, phi.fan_ptr());
  s.phi_ = std::move(phi);
  return s;
}

SheafSpec SheafSpec::ideal_of(StarSet phi) {
  SheafSpec s(SheafKind::kIdealOfY, phi.fan_ptr());
  s.phi_ = std::move(phi);
  return s;
}

SheafSpec SheafSpec::ishida_forms(StarSet phi, std::size_t degree) {
  SheafSpec s(SheafKind::kIshidaForms, phi.fan_ptr());
  s.phi_ = std::move(phi);
  return s.with_degree(degree);
}

SheafSpec SheafSpec::danilov_forms(std::shared_ptr<const Fan> fan, std::size_t degree) {
  return ishida_forms(whole_fan(std::move(fan)), degree);
}

SheafSpec SheafSpec::log_forms(std::shared_ptr<const Fan> fan, BoundaryData boundary, std::size_t degree) {
  boundary = validate_boundary(*fan, std::move(boundary.a), std::move(boundary.b));
  SheafSpec s(SheafKind::kLogForms, std::move(fan));
  s.boundary_ = std::move(boundary);
  return s.with_degree(degree);
}

SheafSpec SheafSpec::twisted(const CartierData& l) const {
  if (&l.fan() != fan_.get()) throw Error(ErrorCode::kCartier, "twist lives on a different fan");
  SheafSpec s(*this);
  s.twist_ = twist_ ? twist_->tensor(l) : l;
  return s;
}

SheafSpec SheafSpec::untwisted() const {
  SheafSpec s(*this);
  s.twist_.reset();
  return s;
}

SheafSpec SheafSpec::with_degree(std::size_t degree) const {
  if ((kind_ == SheafKind::kStructureOnY || kind_ == SheafKind::kIdealOfY) && degree != 0)
    throw Error(ErrorCode::kDegree, "structure and ideal sheaves only exist in degree 0");
  if (degree > fan_->rank())
    throw Error(ErrorCode::kDegree,
                "form degree " + std::to_string(degree) + " exceeds rank " + std::to_string(fan_->rank()));
  SheafSpec s(*this);
  s.degree_ = degree;
  return s;
}

bool SheafSpec::supported_on_polyhedron() const {
  return (kind_ == SheafKind::kStructureOnY || kind_ == SheafKind::kIshidaForms) && !phi_->is_everything();
}

std::string SheafSpec::describe() const {
  std::string out;
  const std::string a = std::to_string(degree_);
  switch (kind_) {
    case SheafKind::kStructureOnY:
      out = "O_Y";
      break;
    case SheafKind::kIdealOfY:
      out = "I_Y";
      break;
    case SheafKind::kIshidaForms:
      out = std::string("Omega~^") + a + (phi_->is_everything() ? "_X" : "_Y");
      break;
    case SheafKind::kLogForms:
      out = "Omega~^" + a + "_X(log(A+B))(-A)";
      break;
  }
  if (twist_) out += " (x) L";
  return out;
}

// --- chart tables ----------------------------------------------------------

IntMatrix reduce_into(const IntMatrix& rows, const FieldSpec& field) {
  if (field.is_rational()) return rows;
  IntMatrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c) out(r, c) = field.reduce(rows(r, c));
  return out;
}

namespace {

IntMatrix scalar_line() { return IntMatrix::from_rows({{1}}, 1); }

IntMatrix field_rows_to_int(const FieldMatrix& m, const FieldSpec& field) {
  if (field.is_rational()) return to_primitive_integer_rows(m);
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).get_num().get_si();
  return out;
}

}  // namespace

SheafModel::SheafModel(SheafSpec spec, FieldSpec field) : spec_(std::move(spec)), field_(field) {
  const Fan& fan = spec_.fan();
  const std::size_t n = fan.rank();
  ambient_dim_ = wedge_dimension(n, spec_.degree());
  for (const auto& c : fan.cones()) face_index_[c.ray_mask] = c.id;

  if (spec_.kind() == SheafKind::kIshidaForms) {
    for (const auto& c : fan.cones()) {
      const Sublattice perp = perp_sublattice(n, c.generators);
      perp_wedges_.push_back(reduce_into(exterior_power_rows(perp.basis(), n, spec_.degree()), field_));
    }
  }
  if (spec_.kind() == SheafKind::kLogForms) {
    for (auto r : spec_.boundary()->a) a_mask_ |= RayMask{1} << r;
    for (auto r : spec_.boundary()->b) b_mask_ |= RayMask{1} << r;
    const auto& subsets = wedge_subsets(n, spec_.degree());
    for (const auto& c : fan.cones()) {
      const bool smooth = is_smooth(fan, c.id);
      smooth_.push_back(smooth);
      IntMatrix table(0, ambient_dim_);
      if (smooth) {
        const AdaptedBasis basis = adapted_basis(n, c.generators);
        for (unsigned s : subsets) {
          std::vector<MVector> us;
          for (std::size_t i = 0; i < n; ++i)
            if (s >> i & 1u) us.push_back(basis.m_basis[i]);
          table.append_row(wedge_coordinates(us, n));
        }
      }
      adapted_wedges_.push_back(reduce_into(table, field_));
    }
    for (const auto& c : fan.cones()) {
      std::vector<std::size_t> faces;
      if (smooth_[c.id]) {
        faces.push_back(c.id);
      } else {
        for (auto f : c.face_ids) {
          if (!smooth_[f]) continue;
          bool maximal = true;
          for (auto g : c.face_ids)
            if (g != f && smooth_[g] && fan.is_face(f, g)) maximal = false;
          if (maximal) faces.push_back(f);
        }
      }
      max_smooth_faces_.push_back(std::move(faces));
    }
  }
}

IntMatrix SheafModel::log_component_smooth(std::size_t chart, const MVector& m) const {
  const Fan& fan = spec_.fan();
  const Cone& c = fan.cone(chart);
  const std::size_t k = c.ray_ids.size();
  std::vector<Int> coord(k);
  for (std::size_t i = 0; i < k; ++i) {
    coord[i] = pairing(c.generators[i], m);
    if (coord[i] < 0) return IntMatrix(0, ambient_dim_);
  }
  const auto& subsets = wedge_subsets(fan.rank(), spec_.degree());
  const IntMatrix& table = adapted_wedges_[chart];
  IntMatrix out(0, ambient_dim_);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    bool keep = true;
    for (std::size_t i = 0; i < k && keep; ++i) {
      const RayMask ray = RayMask{1} << c.ray_ids[i];
      const bool in_s = subsets[s] >> i & 1u;
      const Int theta = (a_mask_ & ray) || (in_s && !((a_mask_ | b_mask_) & ray)) ? 1 : 0;
      keep = coord[i] >= theta;
    }
    if (keep) out.append_row(table.row(s));
  }
  return out;
}

// Every rule below reads m only through the signs of <v_i, m> on the rays of
// the chart (faces of singular charts use a subset of those rays).
IntMatrix SheafModel::untwisted_component(std::size_t chart, const MVector& m) const {
  const Cone& c = spec_.fan().cone(chart);
  if (c.ray_ids.size() > 25) return compute_component(chart, m);
  std::uint64_t key = 0;
  for (const auto& g : c.generators) {
    const Int p = pairing(g, m);
    key = key * 3 + (p < 0 ? 0 : p == 0 ? 1 : 2);
  }
  key |= static_cast<std::uint64_t>(chart) << 40;
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  IntMatrix out = compute_component(chart, m);
  std::unique_lock lock(cache_->mutex);
  cache_->map.emplace(key, out);
  return out;
}

IntMatrix SheafModel::compute_component(std::size_t chart, const MVector& m) const {
  const Fan& fan = spec_.fan();
  const Cone& c = fan.cone(chart);

  if (spec_.kind() == SheafKind::kLogForms) {
    if (smooth_[chart]) return log_component_smooth(chart, m);
    const auto& faces = max_smooth_faces_[chart];
    if (faces.empty()) throw Error(ErrorCode::kSmoothCover, "chart has no smooth faces");
    FieldMatrix acc = FieldMatrix::from_int(log_component_smooth(faces.front(), m), field_);
    for (std::size_t i = 1; i < faces.size() && acc.rows() > 0; ++i)
      acc = intersect_row_spaces(acc, FieldMatrix::from_int(log_component_smooth(faces[i], m), field_), field_);
    return field_rows_to_int(acc, field_);
  }

  // rho = gamma ∩ m^perp, provided m lies in gamma^dual.
  RayMask rho = 0;
  for (std::size_t i = 0; i < c.ray_ids.size(); ++i) {
    const Int p = pairing(c.generators[i], m);
    if (p < 0) return IntMatrix(0, ambient_dim_);
    if (p == 0) rho |= RayMask{1} << c.ray_ids[i];
  }
  const std::size_t rho_id = face_id(rho);
  const bool on_y = spec_.phi()->contains(rho_id);
  switch (spec_.kind()) {
    case SheafKind::kStructureOnY:
      return on_y ? scalar_line() : IntMatrix(0, 1);
    case SheafKind::kIdealOfY:
      return on_y ? IntMatrix(0, 1) : scalar_line();
    case SheafKind::kIshidaForms:
      return on_y ? perp_wedges_[rho_id] : IntMatrix(0, ambient_dim_);
    case SheafKind::kLogForms:
      break;
  }
  throw std::logic_error("unreachable sheaf kind");
}

IntMatrix SheafModel::component(std::size_t chart, const MVector& m) const {
  if (chart >= fan().size()) throw Error(ErrorCode::kChart, "no cone with id " + std::to_string(chart));
  if (m.rank() != fan().rank()) throw Error(ErrorCode::kRankMismatch, "weight " + to_string(m) + " has wrong rank");
  if (spec_.twist()) return untwisted_component(chart, m - spec_.twist()->anchor(chart));
  return untwisted_component(chart, m);
}

WeightComponent SheafModel::weight_component(std::size_t chart, const MVector& m) const {
  return WeightComponent{chart, m, spec_.degree(), component(chart, m)};
}

WeightComponent chart_weight_component(const SheafSpec& spec, std::size_t chart, const MVector& m,
                                       const FieldSpec& field) {
  return SheafModel(spec, field).weight_component(chart, m);
}

// --- maps ------------------------------------------------------------------

FieldMatrix restriction_map(const SheafModel& model, std::size_t from, std::size_t to, const MVector& m) {
  const Fan& fan = model.fan();
  if (from >= fan.size() || to >= fan.size()) throw Error(ErrorCode::kChart, "restriction between unknown charts");
  if (!fan.is_face(to, from)) throw Error(ErrorCode::kNotFace, "restriction target is not a face of the source");
  const FieldSpec& field = model.field();
  const FieldMatrix src = FieldMatrix::from_int(model.component(from, m), field);
  const FieldMatrix dst = FieldMatrix::from_int(model.component(to, m), field);
  if (dst.rows() == 0) return FieldMatrix(src.rows(), 0);
  auto coords = row_coordinates(dst, src, field);
  if (!coords) throw std::logic_error("restriction is not an inclusion at weight " + to_string(m));
  return *coords;
}

FieldMatrix restriction_map(const SheafSpec& spec, std::size_t from, std::size_t to, const MVector& m,
                            const FieldSpec& field) {
  return restriction_map(SheafModel(spec, field), from, to, m);
}

IntMatrix wedge_operator(const MVector& m, std::size_t rank, std::size_t degree) {
  const std::size_t rows = wedge_dimension(rank, degree);
  const std::size_t cols = degree < rank ? wedge_dimension(rank, degree + 1) : 0;
  IntMatrix out(rows, cols);
  if (cols == 0) return out;
  std::vector<Int> e(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    e[r] = 1;
    const auto img = wedge_with(m, e, rank, degree);
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = img[c];
    e[r] = 0;
  }
  return out;
}

std::vector<Int> exterior_derivative(const MVector& m, std::span<const Int> omega, std::size_t degree,
                                     const FieldSpec& field) {
  if (degree >= m.rank()) return {};
  auto out = wedge_with(m, omega, m.rank(), degree);
  for (auto& c : out) c = field.reduce(c);
  return out;
}

}  // namespace torich
