#include "torich/fan.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>
#include <numeric>
#include <set>

#include "torich/error.hpp"
#include "torich/linalg.hpp"

namespace torich {

namespace {

using Row = std::vector<Int>;

Int dot(const Row& a, const Row& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

Row make_primitive(Row v) {
  Int g = 0;
  for (Int c : v) g = std::gcd(g, c);
  if (g > 1)
    for (auto& c : v) c /= g;
  return v;
}

// s*x - t*y
Row combine(Int s, const Row& x, Int t, const Row& y) {
  Row r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = checked_sub(checked_mul(s, x[i]), checked_mul(t, y[i]));
  return make_primitive(std::move(r));
}

struct DDRay {
  Row v;
  std::uint64_t zeros = 0;  // processed constraints vanishing on v
};

// Generators of {x : <c, x> >= 0 for c in constraints}.
std::vector<Row> double_description(std::size_t rank, const std::vector<Row>& constraints) {
  if (constraints.size() > 64) throw Error(ErrorCode::kOverflow, "too many constraints for double description");
  std::vector<Row> lin;
  for (std::size_t i = 0; i < rank; ++i) {
    Row e(rank, 0);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<DDRay> rays;
  std::uint64_t processed = 0;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const Row& a = constraints[k];
    const std::uint64_t bit = std::uint64_t{1} << k;
    std::size_t l0 = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        l0 = i;
        break;
      }
    if (l0 < lin.size()) {
      // The constraint cuts the lineality space: project everything onto a^perp
      // along l0, and l0 itself becomes a ray.
      Row pivot = lin[l0];
      Int s0 = dot(a, pivot);
      if (s0 < 0) {
        for (auto& c : pivot) c = -c;
        s0 = -s0;
      }
      std::vector<Row> new_lin;
      for (std::size_t i = 0; i < lin.size(); ++i)
        if (i != l0) new_lin.push_back(combine(s0, lin[i], dot(a, lin[i]), pivot));
      for (auto& r : rays) {
        r.v = combine(s0, r.v, dot(a, r.v), pivot);
        r.zeros |= bit;
      }
      rays.push_back({make_primitive(pivot), processed});
      lin = std::move(new_lin);
    } else {
      std::vector<std::size_t> pos, neg;
      std::vector<DDRay> next;
      for (std::size_t i = 0; i < rays.size(); ++i) {
        const Int s = dot(a, rays[i].v);
        if (s > 0) pos.push_back(i);
        else if (s < 0) neg.push_back(i);
        if (s >= 0) next.push_back({rays[i].v, rays[i].zeros | (s == 0 ? bit : 0)});
      }
      for (auto p : pos)
        for (auto q : neg) {
          const std::uint64_t common = rays[p].zeros & rays[q].zeros;
          bool adjacent = true;
          for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
            if (r != p && r != q && (rays[r].zeros & common) == common) adjacent = false;
          if (!adjacent) continue;
          const Int sp = dot(a, rays[p].v), sq = dot(a, rays[q].v);
          next.push_back({combine(sp, rays[q].v, sq, rays[p].v), common | bit});
        }
      rays = std::move(next);
    }
    processed |= bit;
  }
  std::set<Row> out;
  for (auto& r : rays) out.insert(r.v);
  if (!lin.empty()) {
    IntMatrix lm(0, rank);
    for (auto& l : lin) lm.append_row(l);
    const IntMatrix h = hermite_normal_form(lm);
    for (std::size_t i = 0; i < h.rows(); ++i) {
      Row l(h.row(i).begin(), h.row(i).end());
      out.insert(l);
      for (auto& c : l) c = -c;
      out.insert(l);
    }
  }
  return {out.begin(), out.end()};
}

template <class From, class To>
std::vector<To> dual_impl(std::size_t rank, std::span<const From> generators) {
  std::vector<Row> cons;
  for (const auto& g : generators) {
    if (g.rank() != rank) throw Error(ErrorCode::kRankMismatch, "generator of wrong rank");
    if (!g.is_zero()) cons.push_back(g.vec());
  }
  std::vector<To> out;
  for (auto& r : double_description(rank, cons)) out.emplace_back(std::move(r));
  return out;
}

template <class A, class B>
Int raw_dot(const A& a, const B& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

}  // namespace

std::vector<MVector> dual_cone(std::size_t rank, std::span<const NVector> generators) {
  return dual_impl<NVector, MVector>(rank, generators);
}

std::vector<NVector> dual_cone(std::size_t rank, std::span<const MVector> generators) {
  return dual_impl<MVector, NVector>(rank, generators);
}

bool dual_contains(std::span<const MVector> dual_generators, const NVector& x) {
  for (const auto& u : dual_generators)
    if (raw_dot(x, u) < 0) return false;
  return true;
}

bool dual_contains(std::span<const NVector> dual_generators, const MVector& x) {
  for (const auto& u : dual_generators)
    if (raw_dot(u, x) < 0) return false;
  return true;
}

namespace {

std::size_t vector_rank(std::span<const NVector> gens, std::size_t rank) {
  IntMatrix m(0, rank);
  for (const auto& g : gens) m.append_row(g.coords());
  return torich::rank(m, FieldSpec::rationals());
}

struct FaceData {
  std::vector<ConeFace> faces;
  std::vector<MVector> dual;
};

FaceData compute_faces(std::size_t rank, std::span<const NVector> gens) {
  const std::size_t k = gens.size();
  if (k > 20) throw Error(ErrorCode::kNotCone, "too many generators");
  FaceData out;
  out.dual = dual_cone(rank, gens);
  // Zero pattern of each dual generator on the cone generators.
  std::vector<RayMask> zero_on(out.dual.size(), 0);
  for (std::size_t j = 0; j < out.dual.size(); ++j)
    for (std::size_t i = 0; i < k; ++i)
      if (pairing(gens[i], out.dual[j]) == 0) zero_on[j] |= RayMask{1} << i;
  const RayMask all = k == 64 ? ~RayMask{0} : (RayMask{1} << k) - 1;
  std::map<RayMask, MVector> closures;
  for (RayMask f = 0; f <= all; ++f) {
    RayMask closure = all;
    MVector witness(rank);
    for (std::size_t j = 0; j < out.dual.size(); ++j)
      if ((zero_on[j] & f) == f) {
        closure &= zero_on[j];
        witness = witness + out.dual[j];
      }
    closures.emplace(closure, witness);
    if (f == all) break;
  }
  if (!closures.count(0) || closures.begin()->first != 0)
    throw Error(ErrorCode::kNotCone, "cone is not strongly convex");
  for (std::size_t i = 0; i < k; ++i)
    if (!closures.count(RayMask{1} << i))
      throw Error(ErrorCode::kNotCone, "generator " + to_string(gens[i]) + " is not an extremal ray");
  for (auto& [mask, w] : closures) out.faces.push_back({mask, primitive(w)});
  std::stable_sort(out.faces.begin(), out.faces.end(), [&](const ConeFace& a, const ConeFace& b) {
    const auto pa = std::popcount(a.rays), pb = std::popcount(b.rays);
    return pa != pb ? pa < pb : a.rays < b.rays;
  });
  return out;
}

// Ray masks compared by (dimension, popcount, lexicographic ray list).
bool ray_list_less(RayMask a, RayMask b) {
  // Lexicographic order on sorted ray index lists.
  while (a && b) {
    const int la = std::countr_zero(a), lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;
}

std::string mask_string(const Fan& fan, RayMask mask) {
  std::string s = "cone{";
  bool first = true;
  for (std::size_t i = 0; i < fan.rays().size(); ++i)
    if (mask >> i & 1u) {
      s += (first ? "" : ",") + to_string(fan.rays()[i]);
      first = false;
    }
  return s + "}";
}

}  // namespace

std::vector<ConeFace> face_lattice(std::size_t rank, std::span<const NVector> generators) {
  return compute_faces(rank, generators).faces;
}

Fan Fan::build(std::size_t rank, std::vector<NVector> rays, const std::vector<std::vector<std::size_t>>& cones) {
  if (rays.size() > 64) throw Error(ErrorCode::kFanAxiom, "at most 64 rays are supported");
  for (const auto& r : rays) {
    if (r.rank() != rank) throw Error(ErrorCode::kRankMismatch, "ray " + to_string(r) + " has wrong rank");
    if (r.is_zero()) throw Error(ErrorCode::kNotCone, "zero ray");
    if (gcd_of(r.coords()) != 1) throw Error(ErrorCode::kNotCone, "ray " + to_string(r) + " is not primitive");
  }
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j)
      if (rays[i] == rays[j]) throw Error(ErrorCode::kFanAxiom, "duplicate ray " + to_string(rays[i]));

  Fan fan;
  fan.rank_ = rank;
  fan.rays_ = std::move(rays);

  // Face closure.
  std::map<RayMask, std::pair<std::vector<MVector>, std::size_t>> found;  // mask -> (dual, dim)
  auto gens_of = [&](RayMask mask) {
    std::vector<NVector> g;
    for (std::size_t i = 0; i < fan.rays_.size(); ++i)
      if (mask >> i & 1u) g.push_back(fan.rays_[i]);
    return g;
  };
  found[0] = {};
  for (const auto& c : cones) {
    RayMask mask = 0;
    for (auto r : c) {
      if (r >= fan.rays_.size()) throw Error(ErrorCode::kFanAxiom, "cone references missing ray " + std::to_string(r));
      mask |= RayMask{1} << r;
    }
    if (mask == 0) continue;
    const auto gens = gens_of(mask);
    FaceData fd;
    try {
      fd = compute_faces(rank, gens);
    } catch (const Error& e) {
      throw Error(ErrorCode::kNotCone, mask_string(fan, mask) + ": " + e.what());
    }
    std::vector<std::size_t> local;
    for (std::size_t i = 0; i < fan.rays_.size(); ++i)
      if (mask >> i & 1u) local.push_back(i);
    for (const auto& f : fd.faces) {
      RayMask global = 0;
      for (std::size_t i = 0; i < local.size(); ++i)
        if (f.rays >> i & 1u) global |= RayMask{1} << local[i];
      if (!found.count(global)) found[global] = {};
    }
  }
  std::vector<RayMask> masks;
  for (auto& [mask, _] : found) masks.push_back(mask);
  std::vector<std::size_t> dims(masks.size());
  std::map<RayMask, std::size_t> dim_of;
  for (auto m : masks) dim_of[m] = vector_rank(gens_of(m), rank);
  std::sort(masks.begin(), masks.end(), [&](RayMask a, RayMask b) {
    if (dim_of[a] != dim_of[b]) return dim_of[a] < dim_of[b];
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
    return ray_list_less(a, b);
  });
  for (std::size_t id = 0; id < masks.size(); ++id) {
    Cone c;
    c.id = id;
    c.ray_mask = masks[id];
    for (std::size_t i = 0; i < fan.rays_.size(); ++i)
      if (masks[id] >> i & 1u) c.ray_ids.push_back(i);
    c.generators = gens_of(masks[id]);
    c.dim = dim_of[masks[id]];
    c.dual_generators = dual_cone(rank, c.generators);
    fan.cones_.push_back(std::move(c));
  }
  for (auto& c : fan.cones_) {
    for (const auto& d : fan.cones_)
      if ((d.ray_mask & ~c.ray_mask) == 0) c.face_ids.push_back(d.id);
  }
  for (const auto& c : fan.cones_) {
    bool maximal = true;
    for (const auto& d : fan.cones_)
      if (d.id != c.id && (c.ray_mask & ~d.ray_mask) == 0) maximal = false;
    if (maximal) fan.max_cones_.push_back(c.id);
  }
  std::string failure;
  if (!fan.certify(&failure)) throw Error(ErrorCode::kFanAxiom, failure);
  return fan;
}

bool Fan::certify(std::string* failure) const {
  auto fail = [&](const std::string& msg) {
    if (failure) *failure = msg;
    return false;
  };
  auto is_face_of = [&](RayMask sub, const Cone& c) {
    // sub is a face of c iff some dual generator of c cuts out exactly sub.
    RayMask closure = c.ray_mask;
    for (const auto& u : c.dual_generators) {
      RayMask z = 0;
      for (auto r : c.ray_ids)
        if (pairing(rays_[r], u) == 0) z |= RayMask{1} << r;
      if ((z & sub) == sub) closure &= z;
    }
    return closure == sub;
  };
  // Axiom (1): faces of members are members.
  for (const auto& c : cones_) {
    for (const auto& f : face_lattice(rank_, c.generators)) {
      RayMask global = 0;
      for (std::size_t i = 0; i < c.ray_ids.size(); ++i)
        if (f.rays >> i & 1u) global |= RayMask{1} << c.ray_ids[i];
      if (!find(global)) return fail("face of " + mask_string(*this, c.ray_mask) + " missing from fan");
    }
  }
  // Axiom (2): sigma ∩ tau is the common face cone(common rays).
  for (std::size_t a = 0; a < cones_.size(); ++a)
    for (std::size_t b = a + 1; b < cones_.size(); ++b) {
      const Cone& s = cones_[a];
      const Cone& t = cones_[b];
      const RayMask common = s.ray_mask & t.ray_mask;
      const std::string pair = mask_string(*this, s.ray_mask) + " and " + mask_string(*this, t.ray_mask);
      if (!is_face_of(common, s) || !is_face_of(common, t))
        return fail("intersection of " + pair + " is not a common face");
      std::vector<MVector> hs = s.dual_generators;
      hs.insert(hs.end(), t.dual_generators.begin(), t.dual_generators.end());
      const auto meet = dual_cone(rank_, std::span<const MVector>(hs));
      const auto cid = find(common);
      if (!cid) return fail("common face of " + pair + " missing");
      for (const auto& x : meet)
        if (!dual_contains(cones_[*cid].dual_generators, x))
          return fail("cones " + pair + " overlap beyond their common face");
    }
  return true;
}

std::optional<std::size_t> Fan::find(RayMask mask) const {
  auto it = std::find_if(cones_.begin(), cones_.end(), [&](const Cone& c) { return c.ray_mask == mask; });
  if (it == cones_.end()) return std::nullopt;
  return it->id;
}

std::optional<std::size_t> Fan::find(std::span<const std::size_t> ray_ids) const {
  RayMask mask = 0;
  for (auto r : ray_ids) {
    if (r >= rays_.size()) return std::nullopt;
    mask |= RayMask{1} << r;
  }
  return find(mask);
}

std::size_t Fan::ray_cone(std::size_t ray_id) const { return *find(RayMask{1} << ray_id); }

std::size_t Fan::intersect(std::size_t a, std::size_t b) const {
  return *find(cones_[a].ray_mask & cones_[b].ray_mask);
}

std::optional<std::size_t> Fan::max_index(std::size_t id) const {
  auto it = std::find(max_cones_.begin(), max_cones_.end(), id);
  if (it == max_cones_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - max_cones_.begin());
}

bool is_complete(const Fan& fan) {
  const std::size_t n = fan.rank();
  if (n == 0) return true;
  for (auto id : fan.max_cones())
    if (fan.cone(id).dim != n) return false;
  if (fan.max_cones().empty()) return false;
  for (const auto& c : fan.cones()) {
    if (c.dim != n - 1) continue;
    std::size_t cofaces = 0;
    for (auto id : fan.max_cones())
      if (fan.is_face(c.id, id)) ++cofaces;
    if (cofaces != 2) return false;
  }
  return true;
}

bool is_smooth(const Fan& fan, std::size_t cone_id) {
  const Cone& c = fan.cone(cone_id);
  IntMatrix m(0, fan.rank());
  for (const auto& g : c.generators) m.append_row(g.coords());
  return gcd_of_maximal_minors(m) == 1;
}

bool is_simplicial(const Fan& fan, std::size_t cone_id) {
  const Cone& c = fan.cone(cone_id);
  return c.dim == c.generators.size();
}

// --- star sets -------------------------------------------------------------

StarSet::StarSet(std::shared_ptr<const Fan> fan, std::vector<bool> members)
    : fan_(std::move(fan)), members_(std::move(members)) {
  assert(members_.size() == fan_->size());
}

std::vector<std::size_t> StarSet::ids() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i]) out.push_back(i);
  return out;
}

bool StarSet::is_everything() const {
  return std::all_of(members_.begin(), members_.end(), [](bool b) { return b; });
}

std::vector<std::size_t> StarSet::components() const {
  std::vector<std::size_t> out;
  for (auto id : ids()) {
    bool minimal = true;
    for (auto other : ids())
      if (other != id && fan_->is_face(other, id)) minimal = false;
    if (minimal) out.push_back(id);
  }
  return out;
}

std::vector<std::size_t> StarSet::component_dimensions() const {
  std::vector<std::size_t> out;
  for (auto id : components()) out.push_back(fan_->rank() - fan_->cone(id).dim);
  std::sort(out.rbegin(), out.rend());
  return out;
}

bool StarSet::is_pure() const {
  const auto dims = component_dimensions();
  return std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) == dims.end();
}

StarSet validate_star_set(std::shared_ptr<const Fan> fan, std::span<const std::size_t> ids) {
  std::vector<bool> members(fan->size(), false);
  for (auto id : ids) {
    if (id >= fan->size()) throw Error(ErrorCode::kStar, "cone id " + std::to_string(id) + " not in fan");
    members[id] = true;
  }
  for (auto s : ids)
    for (const auto& t : fan->cones())
      if (!members[t.id] && fan->is_face(s, t.id))
        throw Error(ErrorCode::kStar, "not star closed: " + mask_string(*fan, fan->cone(s).ray_mask) +
                                          " is in Phi but its coface " + mask_string(*fan, t.ray_mask) + " is not");
  return StarSet(std::move(fan), std::move(members));
}

StarSet skeleton_star_set(std::shared_ptr<const Fan> fan, std::size_t m) {
  std::vector<bool> members(fan->size());
  for (const auto& c : fan->cones()) members[c.id] = c.dim >= m;
  return StarSet(std::move(fan), std::move(members));
}

StarSet whole_fan(std::shared_ptr<const Fan> fan) {
  std::vector<bool> members(fan->size(), true);
  return StarSet(std::move(fan), std::move(members));
}

BoundaryData validate_boundary(const Fan& fan, std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  for (auto r : a)
    if (r >= fan.rays().size()) throw Error(ErrorCode::kBoundary, "A references missing ray " + std::to_string(r));
  for (auto r : b)
    if (r >= fan.rays().size()) throw Error(ErrorCode::kBoundary, "B references missing ray " + std::to_string(r));
  std::vector<std::size_t> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  if (!shared.empty())
    throw Error(ErrorCode::kBoundary, "A and B share ray " + std::to_string(shared.front()));
  return {std::move(a), std::move(b)};
}

// --- Cartier data ----------------------------------------------------------

CartierData::CartierData(std::shared_ptr<const Fan> fan, std::vector<MVector> data)
    : fan_(std::move(fan)), data_(std::move(data)) {
  if (data_.size() != fan_->max_cones().size())
    throw Error(ErrorCode::kCartier, "expected one weight per maximal cone");
  for (const auto& m : data_)
    if (m.rank() != fan_->rank()) throw Error(ErrorCode::kRankMismatch, "Cartier datum of wrong rank");
  anchor_index_.assign(fan_->size(), 0);
  for (const auto& c : fan_->cones()) {
    for (std::size_t i = 0; i < fan_->max_cones().size(); ++i)
      if (fan_->is_face(c.id, fan_->max_cones()[i])) {
        anchor_index_[c.id] = i;
        break;
      }
  }
}

CartierData CartierData::tensor(const CartierData& other) const {
  std::vector<MVector> sum;
  for (std::size_t i = 0; i < data_.size(); ++i) sum.push_back(data_[i] + other.data_[i]);
  return CartierData(fan_, std::move(sum));
}

CartierData CartierData::power(Int k) const {
  std::vector<MVector> out;
  for (const auto& m : data_) out.push_back(m.scaled(k));
  return CartierData(fan_, std::move(out));
}

CartierData CartierData::trivial(std::shared_ptr<const Fan> fan) {
  std::vector<MVector> zeros(fan->max_cones().size(), MVector(fan->rank()));
  return CartierData(std::move(fan), std::move(zeros));
}

bool CartierData::is_trivial() const {
  return std::all_of(data_.begin(), data_.end(), [&](const MVector& m) { return m == data_.front(); });
}

Int CartierData::max_abs_coordinate() const {
  Int out = 0;
  for (const auto& m : data_)
    for (Int c : m.coords()) out = std::max(out, c < 0 ? -c : c);
  return out;
}

CartierData cartier_validate(std::shared_ptr<const Fan> fan, std::vector<MVector> data) {
  CartierData l(fan, std::move(data));
  const auto& maxes = fan->max_cones();
  for (std::size_t i = 0; i < maxes.size(); ++i)
    for (std::size_t j = i + 1; j < maxes.size(); ++j) {
      const std::size_t meet = fan->intersect(maxes[i], maxes[j]);
      for (auto r : fan->cone(meet).ray_ids) {
        const NVector& v = fan->rays()[r];
        if (pairing(v, l.data()[i]) != pairing(v, l.data()[j]))
          throw Error(ErrorCode::kCartier, "data disagree on ray " + to_string(v) + " shared by " +
                                               mask_string(*fan, fan->cone(maxes[i]).ray_mask) + " and " +
                                               mask_string(*fan, fan->cone(maxes[j]).ray_mask));
      }
    }
  return l;
}

CartierData cartier_from_divisor(std::shared_ptr<const Fan> fan, std::span<const Int> coeffs) {
  if (coeffs.size() != fan->rays().size())
    throw Error(ErrorCode::kCartier, "divisor needs one coefficient per ray");
  const std::size_t n = fan->rank();
  const FieldSpec q = FieldSpec::rationals();
  std::vector<MVector> data;
  for (auto id : fan->max_cones()) {
    const Cone& c = fan->cone(id);
    // <v_i, m> = -a_i for the rays of the cone.
    FieldMatrix aug(c.ray_ids.size(), n + 1);
    for (std::size_t i = 0; i < c.ray_ids.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = static_cast<long>(fan->rays()[c.ray_ids[i]][j]);
      aug(i, n) = static_cast<long>(-coeffs[c.ray_ids[i]]);
    }
    const auto pivots = rref(aug, q);
    if (!pivots.empty() && pivots.back() == n)
      throw Error(ErrorCode::kCartier, "divisor is not Cartier on " + mask_string(*fan, c.ray_mask));
    std::vector<Int> m(n, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (aug(i, n).get_den() != 1)
        throw Error(ErrorCode::kCartier, "divisor is not Cartier on " + mask_string(*fan, c.ray_mask));
      m[pivots[i]] = aug(i, n).get_num().get_si();
    }
    data.emplace_back(std::move(m));
  }
  return cartier_validate(std::move(fan), std::move(data));
}

bool is_ample(const CartierData& l) {
  const Fan& fan = l.fan();
  if (!is_complete(fan)) return false;
  const auto& maxes = fan.max_cones();
  for (std::size_t i = 0; i < maxes.size(); ++i)
    for (std::size_t j = 0; j < maxes.size(); ++j) {
      if (i == j) continue;
      const std::size_t wall = fan.intersect(maxes[i], maxes[j]);
      if (fan.cone(wall).dim + 1 != fan.rank()) continue;
      for (auto r : fan.cone(maxes[j]).ray_ids) {
        if (fan.cone(maxes[i]).ray_mask >> r & 1u) continue;
        const NVector& v = fan.rays()[r];
        if (!(pairing(v, l.data()[j]) < pairing(v, l.data()[i]))) return false;
      }
    }
  return true;
}

namespace {

// Nonnegative coefficients c with x = sum c_i g_i over some linearly
// independent subset of generators (Caratheodory), if x lies in the cone.
std::optional<std::vector<mpq_class>> conic_coefficients(std::span<const NVector> gens, const NVector& x,
                                                         std::size_t rank) {
  const FieldSpec q = FieldSpec::rationals();
  const std::size_t k = gens.size();
  for (std::size_t size = 0; size <= std::min(k, rank); ++size) {
    for (unsigned mask : wedge_subsets(k, size)) {
      FieldMatrix basis(0, rank);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1u) {
          std::vector<mpq_class> row(rank);
          for (std::size_t j = 0; j < rank; ++j) row[j] = static_cast<long>(gens[i][j]);
          basis.append_row(row);
          idx.push_back(i);
        }
      if (torich::rank(basis, q) != size) continue;
      FieldMatrix target(1, rank);
      for (std::size_t j = 0; j < rank; ++j) target(0, j) = static_cast<long>(x[j]);
      auto coords = row_coordinates(basis, target, q);
      if (!coords) continue;
      bool nonneg = true;
      for (std::size_t i = 0; i < size; ++i)
        if ((*coords)(0, i) < 0) nonneg = false;
      if (!nonneg) continue;
      std::vector<mpq_class> c(k);
      for (std::size_t i = 0; i < size; ++i) c[idx[i]] = (*coords)(0, i);
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<MVector> polytope_points(const CartierData& l) {
  const Fan& fan = l.fan();
  if (!is_complete(fan)) throw Error(ErrorCode::kUnbounded, "section polytope of a non-complete fan is unbounded");
  const std::size_t n = fan.rank();
  // Coordinate bounds: +/- e_j lies in a maximal cone sigma, so
  // +/- m_j = sum c_i <v_i, m> >= sum c_i <v_i, m_sigma>.
  std::vector<Int> lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j)
    for (int sign : {1, -1}) {
      NVector e(n);
      e[j] = sign;
      bool done = false;
      for (std::size_t i = 0; i < fan.max_cones().size() && !done; ++i) {
        const Cone& c = fan.cone(fan.max_cones()[i]);
        if (!dual_contains(c.dual_generators, e)) continue;
        auto coeffs = conic_coefficients(c.generators, e, n);
        if (!coeffs) continue;
        mpq_class bound = 0;
        for (std::size_t r = 0; r < c.generators.size(); ++r)
          bound += (*coeffs)[r] * static_cast<long>(pairing(c.generators[r], l.data()[i]));
        // sign * m_j >= bound
        mpz_class b;
        if (sign > 0) {
          mpz_cdiv_q(b.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
          lo[j] = b.get_si();
        } else {
          mpz_cdiv_q(b.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
          hi[j] = -b.get_si();
        }
        done = true;
      }
      assert(done);
    }
  std::vector<MVector> out;
  for (std::size_t j = 0; j < n; ++j)
    if (lo[j] > hi[j]) return out;
  MVector m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = lo[j];
  while (true) {
    bool inside = true;
    for (std::size_t i = 0; i < fan.max_cones().size() && inside; ++i) {
      const Cone& c = fan.cone(fan.max_cones()[i]);
      for (const auto& g : c.generators)
        if (pairing(g, m - l.data()[i]) < 0) {
          inside = false;
          break;
        }
    }
    if (inside) out.push_back(m);
    std::size_t j = 0;
    while (j < n && m[j] == hi[j]) {
      m[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++m[j];
  }
  std::sort(out.begin(), out.end());
  return out;
}

CartierData pull_back(const CartierData& l, std::shared_ptr<const Fan> source) {
  const Fan& target = l.fan();
  std::vector<MVector> data;
  for (auto id : source->max_cones()) {
    const Cone& c = source->cone(id);
    std::optional<std::size_t> host;
    for (std::size_t i = 0; i < target.max_cones().size() && !host; ++i) {
      const Cone& t = target.cone(target.max_cones()[i]);
      bool inside = true;
      for (const auto& g : c.generators)
        if (!dual_contains(t.dual_generators, g)) inside = false;
      if (inside) host = i;
    }
    if (!host) throw Error(ErrorCode::kNotCompatible, "source cone not contained in any target cone");
    data.push_back(l.data()[*host]);
  }
  return cartier_validate(std::move(source), std::move(data));
}

}  // namespace torich
