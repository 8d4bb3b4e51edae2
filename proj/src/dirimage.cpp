#include "torich/dirimage.hpp"

#include <map>
#include <stdexcept>

#include "torich/error.hpp"

namespace torich {

namespace {

bool cone_inside(const Cone& inner, const Cone& outer) {
  for (const auto& g : inner.generators)
    if (!dual_contains(outer.dual_generators, g)) return false;
  return true;
}

std::string cone_string(const Cone& c) {
  std::string s = "cone{";
  for (std::size_t i = 0; i < c.generators.size(); ++i) s += (i ? "," : "") + to_string(c.generators[i]);
  return s + "}";
}

}  // namespace

FanMorphism validate_fan_morphism(std::shared_ptr<const Fan> source, std::shared_ptr<const Fan> target,
                                  const std::optional<IntMatrix>& lattice_map) {
  if (source->rank() != target->rank())
    throw Error(ErrorCode::kNotCompatible, "source and target lattices have different ranks");
  if (lattice_map && !(*lattice_map == IntMatrix::identity(source->rank())))
    throw Error(ErrorCode::kNotCompatible, "only the identity lattice map (subdivisions) is supported");
  FanMorphism f;
  f.source_ = source;
  f.target_ = target;

  for (const auto& c : source->cones()) {
    std::optional<std::size_t> best;
    for (const auto& t : target->cones())
      if (cone_inside(c, t) && (!best || t.dim < target->cone(*best).dim)) best = t.id;
    if (!best) throw Error(ErrorCode::kNotCompatible, cone_string(c) + " lies in no cone of the target fan");
    f.image_.push_back(*best);
  }

  // Tiling: inside each target cone τ, the maximal source cones have dim τ and
  // every facet of them is either on the boundary of τ (one neighbour) or an
  // interior wall (two neighbours).
  for (const auto& t : target->cones()) {
    std::vector<std::size_t> fiber;
    for (const auto& c : source->cones()) {
      if (!target->is_face(f.image_[c.id], t.id)) continue;
      bool maximal = true;
      for (const auto& d : source->cones())
        if (d.id != c.id && source->is_face(c.id, d.id) && target->is_face(f.image_[d.id], t.id)) maximal = false;
      if (maximal) fiber.push_back(c.id);
    }
    for (auto c : fiber)
      if (source->cone(c).dim != t.dim)
        throw Error(ErrorCode::kNotCompatible, cone_string(t) + " is not tiled: " + cone_string(source->cone(c)) +
                                                   " has lower dimension");
    if (t.dim > 0) {
      for (const auto& w : source->cones()) {
        if (w.dim + 1 != t.dim || !target->is_face(f.image_[w.id], t.id)) continue;
        std::size_t neighbours = 0;
        for (auto c : fiber)
          if (source->is_face(w.id, c)) ++neighbours;
        if (neighbours == 0) continue;
        const bool boundary = f.image_[w.id] != t.id;
        if (neighbours != (boundary ? 1u : 2u))
          throw Error(ErrorCode::kNotCompatible,
                      cone_string(t) + " is not tiled near the wall " + cone_string(w));
      }
    }
    if (fiber.empty()) throw Error(ErrorCode::kNotCompatible, cone_string(t) + " contains no source cone");
    f.fibers_.push_back(std::move(fiber));
  }

  f.identity_ = source->rays() == target->rays() && source->size() == target->size();
  if (f.identity_)
    for (std::size_t i = 0; i < source->size(); ++i)
      f.identity_ = f.identity_ && source->cone(i).ray_mask == target->cone(i).ray_mask;
  return f;
}

std::vector<std::size_t> RelativeCohomology::dims() const {
  std::vector<std::size_t> out;
  for (const auto& b : basis) out.push_back(b.rows());
  return out;
}

RelativeCohomology relative_cohomology(const FanMorphism& f, const SheafModel& source_model,
                                       std::span<const std::size_t> base_charts, const MVector& m) {
  if (&source_model.fan() != f.source().get())
    throw Error(ErrorCode::kNotCompatible, "sheaf does not live on the source fan");
  if (base_charts.empty()) throw Error(ErrorCode::kChart, "empty base chart set");
  const Fan& base = *f.target();
  std::size_t tau = base_charts.front();
  for (auto c : base_charts) {
    if (c >= base.size()) throw Error(ErrorCode::kChart, "unknown base chart " + std::to_string(c));
    tau = base.intersect(tau, c);
  }
  const FieldSpec& field = source_model.field();
  RelativeCohomology out;
  out.base_cone = tau;
  out.cover.charts = f.fiber_cover(tau);
  out.weight = m;
  const CechNerve nerve(source_model.fan(), out.cover);
  out.complex = cech_blocks(source_model, nerve, m);
  if (!out.complex.squares_to_zero()) throw std::logic_error("relative Čech differential does not square to zero");

  const std::size_t top = out.cover.charts.size();
  for (std::size_t j = 0; j < top; ++j) {
    std::size_t width = 0;
    out.complex.ambient_offsets(j, &width);
    const FieldMatrix basis = FieldMatrix::from_int(out.complex.basis_matrix(j), field);
    if (basis.rows() == 0) {
      out.basis.emplace_back(0, width);
      out.coboundaries.emplace_back(0, width);
      continue;
    }
    const FieldMatrix d = FieldMatrix::from_int(out.complex.differential(j), field);
    FieldMatrix cocycles = d.cols() == 0 ? basis : multiply(left_kernel(d, field), basis, field);
    FieldMatrix bounds(0, width);
    if (j > 0) {
      FieldMatrix prev = FieldMatrix::from_int(out.complex.differential(j - 1), field);
      if (prev.rows() > 0 && prev.cols() > 0) {
        const auto pivots = rref(prev, field);
        std::vector<std::size_t> keep(pivots.size());
        for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
        bounds = prev.select_rows(keep);
      }
    }
    const auto extra = extend_basis(bounds, cocycles, field);
    out.basis.push_back(cocycles.select_rows(extra));
    out.coboundaries.push_back(std::move(bounds));
  }
  return out;
}

FieldMatrix induced_map(const FanMorphism& f, const RelativeCohomology& from, const RelativeCohomology& to,
                        std::size_t degree) {
  const Fan& z = *f.source();
  const FieldSpec& field = from.complex.field();
  if (!f.target()->is_face(to.base_cone, from.base_cone))
    throw Error(ErrorCode::kNotFace, "induced map needs a face of the source chart");
  const std::size_t rows = degree < from.basis.size() ? from.basis[degree].rows() : 0;
  const std::size_t cols = degree < to.basis.size() ? to.basis[degree].rows() : 0;
  if (rows == 0 || cols == 0) return FieldMatrix(rows, cols);

  // Refinement λ: to-chart j lies in from-chart λ(j).
  std::vector<std::size_t> lambda;
  for (auto zj : to.cover.charts) {
    std::optional<std::size_t> host;
    for (std::size_t i = 0; i < from.cover.charts.size() && !host; ++i)
      if (z.is_face(zj, from.cover.charts[i])) host = i;
    if (!host) throw std::logic_error("fiber covers are not a refinement");
    lambda.push_back(*host);
  }

  // Map cochains in ambient coordinates: (λ^*c)(S') = sign · c(λ(S')).
  const BlockComplex& src = from.complex;
  const BlockComplex& dst = to.complex;
  std::size_t src_width = 0, dst_width = 0;
  const auto src_off = src.ambient_offsets(degree, &src_width);
  const auto dst_off = dst.ambient_offsets(degree, &dst_width);
  const CechNerve src_nerve(z, from.cover);
  const CechNerve dst_nerve(z, to.cover);
  std::vector<std::size_t> src_block_of(std::size_t{1} << from.cover.charts.size(), SIZE_MAX);
  {
    std::size_t b = 0;
    for (std::size_t p = 0; p < from.cover.charts.size(); ++p)
      for (auto s : src_nerve.simplices(p)) src_block_of[s] = b++;
  }
  std::size_t block_base = 0;
  for (std::size_t p = 0; p < degree; ++p) block_base += dst_nerve.simplices(p).size();

  FieldMatrix pull(src_width, dst_width);
  const auto& dst_simplices = dst_nerve.simplices(degree);
  for (std::size_t k = 0; k < dst_simplices.size(); ++k) {
    const std::size_t db = block_base + k;
    if (dst_off[db] == SIZE_MAX) continue;
    std::vector<std::size_t> images;
    for (std::size_t j = 0; j < to.cover.charts.size(); ++j)
      if (dst_simplices[k] >> j & 1u) images.push_back(lambda[j]);
    std::uint32_t mask = 0;
    bool repeated = false;
    for (auto i : images) {
      repeated = repeated || (mask >> i & 1u);
      mask |= std::uint32_t{1} << i;
    }
    if (repeated) continue;
    int inversions = 0;
    for (std::size_t a = 0; a < images.size(); ++a)
      for (std::size_t b = a + 1; b < images.size(); ++b)
        if (images[a] > images[b]) ++inversions;
    const std::size_t sb = src_block_of[mask];
    if (src_off[sb] == SIZE_MAX) continue;
    const std::size_t w = dst.blocks()[db].width();
    for (std::size_t c = 0; c < w; ++c) pull(src_off[sb] + c, dst_off[db] + c) = field.from_int(inversions % 2 ? -1 : 1);
  }

  const FieldMatrix image = multiply(from.basis[degree], pull, field);
  FieldMatrix frame = to.coboundaries[degree];
  frame.append_rows(to.basis[degree]);
  const auto coords = row_coordinates(frame, image, field);
  if (!coords) throw std::logic_error("restricted cocycle is not a cocycle");
  const std::size_t skip = to.coboundaries[degree].rows();
  FieldMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*coords)(r, skip + c);
  return out;
}

Int DirectImageTable::euler_characteristic() const {
  Int chi = 0;
  for (std::size_t j = 0; j < h.size(); ++j)
    for (std::size_t i = 0; i < h[j].size(); ++i) chi += ((i + j) % 2 ? -1 : 1) * h[j][i];
  return chi;
}

namespace {

// Per-weight h^i of the base Čech complex of R^j, flattened as j * base + i.
class DirectImageKernel {
 public:
  DirectImageKernel(const FanMorphism& f, const SheafSpec& spec, const FieldSpec& field)
      : f_(f), model_(spec, field), nerve_(*f.target(), CechCover{f.target()->max_cones()}) {
    for (std::size_t c = 0; c < f.target()->size(); ++c)
      fiber_max_ = std::max(fiber_max_, f.fiber_cover(c).size());
  }

  std::size_t relative_degrees() const { return fiber_max_; }
  std::size_t base_degrees() const { return nerve_.size(); }
  std::size_t width() const { return relative_degrees() * base_degrees(); }

  std::vector<Int> operator()(const MVector& m) const {
    const FieldSpec& field = model_.field();
    std::vector<Int> out(width(), 0);
    std::map<std::size_t, RelativeCohomology> rel;
    auto relative = [&](std::size_t tau) -> const RelativeCohomology& {
      auto it = rel.find(tau);
      if (it == rel.end()) {
        const std::size_t charts[1] = {tau};
        it = rel.emplace(tau, relative_cohomology(f_, model_, charts, m)).first;
      }
      return it->second;
    };
    bool any = false;
    for (auto c : f_.target()->max_cones())
      for (auto d : relative(c).dims()) any = any || d > 0;
    for (std::size_t c = 0; c < f_.target()->size() && !any; ++c) {
      bool used = false;
      for (std::size_t p = 0; p < nerve_.size() && !used; ++p)
        for (auto s : nerve_.simplices(p)) used = used || nerve_.cone_of(s) == c;
      if (used)
        for (auto d : relative(c).dims()) any = any || d > 0;
    }
    if (!any) return out;

    std::map<std::pair<std::size_t, std::size_t>, std::vector<FieldMatrix>> maps;
    for (std::size_t j = 0; j < relative_degrees(); ++j) {
      auto dim_at = [&](std::uint32_t s) {
        const auto dims = relative(nerve_.cone_of(s)).dims();
        return j < dims.size() ? dims[j] : 0;
      };
      ChainComplexOverField base;
      base.field = field;
      for (std::size_t p = 0; p < nerve_.size(); ++p) {
        std::size_t total = 0;
        for (auto s : nerve_.simplices(p)) total += dim_at(s);
        base.dims.push_back(total);
      }
      for (std::size_t p = 0; p + 1 < nerve_.size(); ++p) {
        FieldMatrix d(base.dims[p], base.dims[p + 1]);
        std::vector<std::size_t> col_off;
        std::size_t at = 0;
        std::vector<std::size_t> col_of(std::size_t{1} << nerve_.size(), 0);
        for (auto s : nerve_.simplices(p + 1)) {
          col_of[s] = at;
          at += dim_at(s);
        }
        std::size_t row = 0;
        for (auto t : nerve_.simplices(p)) {
          const std::size_t rows = dim_at(t);
          if (rows == 0) continue;
          for (std::size_t i = 0; i < nerve_.size(); ++i) {
            if (t >> i & 1u) continue;
            const std::uint32_t s = t | (std::uint32_t{1} << i);
            if (dim_at(s) == 0) continue;
            const std::size_t from = nerve_.cone_of(t), to = nerve_.cone_of(s);
            auto key = std::make_pair(from, to);
            auto it = maps.find(key);
            if (it == maps.end()) {
              std::vector<FieldMatrix> per_degree;
              for (std::size_t jj = 0; jj < relative_degrees(); ++jj)
                per_degree.push_back(induced_map(f_, relative(from), relative(to), jj));
              it = maps.emplace(key, std::move(per_degree)).first;
            }
            const FieldMatrix& r = it->second[j];
            const mpq_class sign = field.from_int(cech_sign(s, i));
            for (std::size_t a = 0; a < r.rows(); ++a)
              for (std::size_t b = 0; b < r.cols(); ++b)
                d(row + a, col_of[s] + b) = field.mul(sign, r(a, b));
          }
          row += rows;
        }
        base.differentials.push_back(std::move(d));
      }
      if (!base.squares_to_zero()) throw std::logic_error("base Čech differential does not square to zero");
      const auto h = base.cohomology();
      for (std::size_t i = 0; i < h.size(); ++i) out[j * base_degrees() + i] = static_cast<Int>(h[i]);
    }
    return out;
  }

 private:
  const FanMorphism& f_;
  SheafModel model_;
  CechNerve nerve_;
  std::size_t fiber_max_ = 0;
};

}  // namespace

DirectImageTable twisted_direct_image_cohomology(const FanMorphism& f, const SheafSpec& spec, const CartierData& l,
                                                 const FieldSpec& field, const BoxPolicy& policy) {
  if (spec.fan_ptr() != f.source()) throw Error(ErrorCode::kNotCompatible, "sheaf does not live on the source fan");
  if (&l.fan() != f.target().get()) throw Error(ErrorCode::kNotCompatible, "line bundle does not live on the target");
  if (!is_complete(*f.target()) && !policy.explicit_radius)
    throw Error(ErrorCode::kUnbounded, "direct image cohomology needs a complete base or an explicit box");
  const SheafSpec twisted = spec.twisted(pull_back(l, f.source()));
  const DirectImageKernel kernel(f, twisted, field);
  const Int r0 = std::max(default_initial_radius(*f.source(), twisted.twist()),
                          default_initial_radius(*f.target(), l));
  const StabilizedSum s = stabilized_sum(f.source()->rank(), r0, policy, kernel.width(),
                                         [&](const MVector& m) { return kernel(m); });
  const std::size_t n = f.source()->rank();
  DirectImageTable out;
  out.field = field;
  out.certificate = s.certificate;
  out.h.assign(n + 1, std::vector<Int>(n + 1, 0));
  for (std::size_t j = 0; j < kernel.relative_degrees(); ++j)
    for (std::size_t i = 0; i < kernel.base_degrees(); ++i) {
      const Int v = s.totals[j * kernel.base_degrees() + i];
      if (j > n || i > n) {
        if (v != 0) throw std::logic_error("cohomology above the dimension");
        continue;
      }
      out.h[j][i] = v;
    }
  return out;
}

}  // namespace torich
