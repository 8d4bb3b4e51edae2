#include "torich/complex.hpp"

#include <mutex>
#include <stdexcept>

#include "torich/error.hpp"

namespace torich {

// --- ChainComplexOverField -------------------------------------------------

std::vector<std::size_t> ChainComplexOverField::cohomology() const {
  std::vector<std::size_t> ranks(dims.size(), 0);
  for (std::size_t p = 0; p < differentials.size(); ++p) ranks[p] = rank(differentials[p], field);
  std::vector<std::size_t> h(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) h[p] = dims[p] - ranks[p] - (p ? ranks[p - 1] : 0);
  return h;
}

bool ChainComplexOverField::squares_to_zero() const {
  for (std::size_t p = 0; p + 1 < differentials.size(); ++p)
    if (!multiply(differentials[p], differentials[p + 1], field).is_zero()) return false;
  return true;
}

Int ChainComplexOverField::euler_characteristic() const {
  Int chi = 0;
  for (std::size_t p = 0; p < dims.size(); ++p) chi += (p % 2 ? -1 : 1) * static_cast<Int>(dims[p]);
  return chi;
}

// --- BlockComplex ----------------------------------------------------------

std::size_t BlockComplex::add_block(std::size_t degree, IntMatrix basis) {
  top_degree_ = std::max(top_degree_, degree);
  blocks_.push_back(Block{degree, std::move(basis)});
  return blocks_.size() - 1;
}

int BlockComplex::add_transform(IntMatrix t) {
  transforms_.push_back(std::move(t));
  return static_cast<int>(transforms_.size()) - 1;
}

void BlockComplex::add_arrow(std::size_t from, std::size_t to, Int sign, int transform) {
  arrows_.push_back(Arrow{from, to, sign, transform});
}

std::vector<std::size_t> BlockComplex::dims() const {
  std::vector<std::size_t> d(blocks_.empty() ? 0 : top_degree_ + 1, 0);
  for (const auto& b : blocks_) d[b.degree] += b.dim();
  return d;
}

std::vector<std::size_t> BlockComplex::blocks_in_degree(std::size_t degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].degree == degree && blocks_[i].dim() > 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> BlockComplex::ambient_offsets(std::size_t degree, std::size_t* total) const {
  std::vector<std::size_t> off(blocks_.size(), SIZE_MAX);
  std::size_t at = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].degree == degree && blocks_[i].dim() > 0) {
      off[i] = at;
      at += blocks_[i].width();
    }
  if (total) *total = at;
  return off;
}

IntMatrix BlockComplex::apply(std::size_t p, const IntMatrix& rows, const std::vector<std::size_t>& row_block) const {
  std::size_t width = 0;
  const auto off = ambient_offsets(p + 1, &width);
  const auto src_off = ambient_offsets(p);
  IntMatrix out(rows.rows(), width);
  std::vector<std::vector<const Arrow*>> outgoing(blocks_.size());
  for (const auto& a : arrows_)
    if (blocks_[a.from].degree == p && off[a.to] != SIZE_MAX) outgoing[a.from].push_back(&a);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const std::size_t b = row_block[r];
    const Block& src = blocks_[b];
    const auto v = rows.row(r).subspan(src_off[b], src.width());
    for (const Arrow* a : outgoing[b]) {
      const Block& dst = blocks_[a->to];
      auto target = out.row(r).subspan(off[a->to], dst.width());
      if (a->transform < 0) {
        for (std::size_t c = 0; c < v.size(); ++c) target[c] = checked_add(target[c], checked_mul(a->sign, v[c]));
      } else {
        const IntMatrix& t = transforms_[a->transform];
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (v[i] == 0) continue;
          const Int s = checked_mul(a->sign, v[i]);
          for (std::size_t c = 0; c < t.cols(); ++c)
            if (t(i, c)) target[c] = checked_add(target[c], checked_mul(s, t(i, c)));
        }
      }
    }
  }
  if (!field_.is_rational())
    for (std::size_t r = 0; r < out.rows(); ++r)
      for (auto& x : out.row(r)) x = field_.reduce(x);
  return out;
}

IntMatrix BlockComplex::basis_matrix(std::size_t p) const {
  std::size_t width = 0;
  const auto off = ambient_offsets(p, &width);
  IntMatrix out(0, width);
  for (auto b : blocks_in_degree(p)) {
    const Block& blk = blocks_[b];
    for (std::size_t r = 0; r < blk.dim(); ++r) {
      auto row = out.append_zero_row();
      for (std::size_t c = 0; c < blk.width(); ++c) row[off[b] + c] = blk.basis(r, c);
    }
  }
  return out;
}

IntMatrix BlockComplex::differential(std::size_t p) const {
  std::vector<std::size_t> row_block;
  for (auto b : blocks_in_degree(p))
    for (std::size_t r = 0; r < blocks_[b].dim(); ++r) row_block.push_back(b);
  return apply(p, basis_matrix(p), row_block);
}

IntMatrix BlockComplex::ambient_differential(std::size_t p) const {
  std::size_t width = 0;
  const auto off = ambient_offsets(p, &width);
  IntMatrix rows(width, width);
  std::vector<std::size_t> row_block(width);
  for (auto b : blocks_in_degree(p))
    for (std::size_t c = 0; c < blocks_[b].width(); ++c) {
      rows(off[b] + c, off[b] + c) = 1;
      row_block[off[b] + c] = b;
    }
  return apply(p, rows, row_block);
}

bool BlockComplex::squares_to_zero() const {
  for (std::size_t p = 0; p + 2 <= top_degree_; ++p) {
    const IntMatrix d = differential(p);
    if (d.rows() == 0 || d.cols() == 0) continue;
    const IntMatrix a = ambient_differential(p + 1);
    if (a.cols() == 0) continue;
    const IntMatrix dd = d * a;
    for (Int x : dd.data())
      if (field_.reduce(x) != 0) return false;
  }
  return true;
}

std::vector<std::size_t> BlockComplex::cohomology(bool certify) const {
  if (certify && !squares_to_zero()) throw std::logic_error("differential does not square to zero");
  const auto d = dims();
  std::vector<std::size_t> ranks(d.size(), 0);
  for (std::size_t p = 0; p + 1 < d.size(); ++p)
    if (d[p] > 0 && d[p + 1] > 0) ranks[p] = rank(differential(p), field_);
  std::vector<std::size_t> h(d.size());
  for (std::size_t p = 0; p < d.size(); ++p) h[p] = d[p] - ranks[p] - (p ? ranks[p - 1] : 0);
  return h;
}

ChainComplexOverField BlockComplex::to_chain_complex() const {
  ChainComplexOverField out;
  out.field = field_;
  out.dims = dims();
  for (std::size_t p = 0; p + 1 < out.dims.size(); ++p) {
    const IntMatrix d = differential(p);
    if (out.dims[p] == 0 || out.dims[p + 1] == 0) {
      out.differentials.emplace_back(out.dims[p], out.dims[p + 1]);
      continue;
    }
    const FieldMatrix basis = FieldMatrix::from_int(basis_matrix(p + 1), field_);
    auto coords = row_coordinates(basis, FieldMatrix::from_int(d, field_), field_);
    if (!coords) throw std::logic_error("differential leaves the target subspace");
    out.differentials.push_back(std::move(*coords));
  }
  return out;
}

// --- covers ----------------------------------------------------------------

CechCover default_cover(const SheafSpec& spec) {
  CechCover cover;
  const Fan& fan = spec.fan();
  for (auto id : fan.max_cones())
    if (!spec.supported_on_polyhedron() || spec.phi()->contains(id)) cover.charts.push_back(id);
  return cover;
}

namespace {

void combinations(std::size_t n, std::size_t k, std::size_t start, std::uint32_t acc, std::vector<std::uint32_t>& out) {
  if (k == 0) {
    out.push_back(acc);
    return;
  }
  for (std::size_t i = start; i + k <= n; ++i) combinations(n, k - 1, i + 1, acc | (std::uint32_t{1} << i), out);
}

}  // namespace

CechNerve::CechNerve(const Fan& fan, CechCover cover) : cover_(std::move(cover)) {
  const std::size_t c = cover_.charts.size();
  if (c > 20) throw Error(ErrorCode::kChart, "covers with more than 20 charts are not supported");
  for (auto id : cover_.charts)
    if (id >= fan.size()) throw Error(ErrorCode::kChart, "cover references unknown cone " + std::to_string(id));
  cone_.assign(std::size_t{1} << c, 0);
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << c); ++s) {
    const int low = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    cone_[s] = rest ? fan.intersect(cone_[rest], cover_.charts[low]) : cover_.charts[low];
  }
  for (std::size_t p = 0; p < c; ++p) {
    simplices_.emplace_back();
    combinations(c, p + 1, 0, 0, simplices_.back());
  }
}

std::vector<IntMatrix> nerve_components(const SheafModel& model, const CechNerve& nerve, const MVector& m) {
  std::vector<IntMatrix> out(model.fan().size());
  std::vector<bool> done(model.fan().size(), false);
  for (std::size_t p = 0; p < nerve.size(); ++p)
    for (auto s : nerve.simplices(p)) {
      const std::size_t cone = nerve.cone_of(s);
      if (done[cone]) continue;
      out[cone] = model.component(cone, m);
      done[cone] = true;
    }
  return out;
}

BlockComplex cech_blocks(const FieldSpec& field, const CechNerve& nerve, const std::vector<IntMatrix>& components) {
  BlockComplex out(field);
  const std::size_t c = nerve.size();
  std::vector<std::size_t> index(std::size_t{1} << c, SIZE_MAX);
  for (std::size_t p = 0; p < c; ++p)
    for (auto s : nerve.simplices(p)) index[s] = out.add_block(p, components.at(nerve.cone_of(s)));
  for (std::size_t p = 0; p + 1 < c; ++p)
    for (auto t : nerve.simplices(p))
      for (std::size_t j = 0; j < c; ++j) {
        if (t >> j & 1u) continue;
        const std::uint32_t s = t | (std::uint32_t{1} << j);
        out.add_arrow(index[t], index[s], cech_sign(s, j));
      }
  return out;
}

BlockComplex cech_blocks(const SheafModel& model, const CechNerve& nerve, const MVector& m) {
  return cech_blocks(model.field(), nerve, nerve_components(model, nerve, m));
}

std::string CechMemo::key(const CechNerve& nerve, const std::vector<IntMatrix>& components) {
  std::string out;
  auto put = [&](Int v) { out.append(reinterpret_cast<const char*>(&v), sizeof v); };
  std::vector<bool> seen(components.size(), false);
  for (std::size_t p = 0; p < nerve.size(); ++p)
    for (auto s : nerve.simplices(p)) {
      const std::size_t cone = nerve.cone_of(s);
      if (seen[cone]) continue;
      seen[cone] = true;
      const IntMatrix& b = components[cone];
      put(static_cast<Int>(cone));
      put(static_cast<Int>(b.rows()));
      put(static_cast<Int>(b.cols()));
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t col = 0; col < b.cols(); ++col) put(b(r, col));
    }
  return out;
}

std::optional<std::vector<std::size_t>> CechMemo::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void CechMemo::insert(const std::string& key, const std::vector<std::size_t>& h) {
  std::unique_lock lock(mutex_);
  if (map_.size() < capacity_) map_.emplace(key, h);
}

std::size_t CechMemo::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

std::vector<std::size_t> cech_cohomology(const FieldSpec& field, const CechNerve& nerve,
                                         const std::vector<IntMatrix>& components, CechMemo* memo) {
  bool empty = true;
  for (std::size_t p = 0; p < nerve.size() && empty; ++p)
    for (auto s : nerve.simplices(p)) empty = empty && components[nerve.cone_of(s)].rows() == 0;
  if (empty) return std::vector<std::size_t>(nerve.size(), 0);
  std::string key;
  if (memo) {
    key = CechMemo::key(nerve, components);
    if (auto hit = memo->find(key)) return *hit;
  }
  const auto h = cech_blocks(field, nerve, components).cohomology();
  if (memo) memo->insert(key, h);
  return h;
}

BlockComplex total_blocks(const std::vector<SheafModel>& models, const CechNerve& nerve, const MVector& m) {
  if (models.empty()) throw std::invalid_argument("no form degrees given");
  BlockComplex out(models.front().field());
  const std::size_t c = nerve.size();
  const std::size_t n = models.front().fan().rank();
  std::vector<std::uint32_t> order;
  std::vector<std::size_t> degree_of;
  for (std::size_t p = 0; p < c; ++p)
    for (auto s : nerve.simplices(p)) {
      order.push_back(s);
      degree_of.push_back(p);
    }
  std::vector<std::size_t> position(std::size_t{1} << c, SIZE_MAX);
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  const std::size_t k = order.size();

  for (std::size_t a = 0; a < models.size(); ++a) {
    std::vector<IntMatrix> cache(models[a].fan().size());
    std::vector<bool> cached(models[a].fan().size(), false);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t cone = nerve.cone_of(order[i]);
      if (!cached[cone]) {
        cache[cone] = models[a].component(cone, m);
        cached[cone] = true;
      }
      out.add_block(degree_of[i] + a, cache[cone]);
    }
  }
  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint32_t t = order[i];
      for (std::size_t j = 0; j < c; ++j) {
        if (t >> j & 1u) continue;
        const std::uint32_t s = t | (std::uint32_t{1} << j);
        out.add_arrow(a * k + i, a * k + position[s], cech_sign(s, j));
      }
    }
    if (a + 1 < models.size()) {
      const int w = out.add_transform(reduce_into(wedge_operator(m, n, a), models[a].field()));
      for (std::size_t i = 0; i < k; ++i)
        out.add_arrow(a * k + i, (a + 1) * k + i, degree_of[i] % 2 ? -1 : 1, w);
    }
  }
  return out;
}

ChainComplexOverField cech_complex(const SheafSpec& spec, const CechCover& cover, const MVector& m,
                                   const FieldSpec& field) {
  SheafModel model(spec, field);
  CechNerve nerve(spec.fan(), cover);
  const BlockComplex blocks = cech_blocks(model, nerve, m);
  if (!blocks.squares_to_zero()) throw std::logic_error("Čech differential does not square to zero");
  return blocks.to_chain_complex();
}

}  // namespace torich
