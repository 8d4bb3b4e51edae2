#include "doctest.h"
#include "fixtures.hpp"
#include "torich/dirimage.hpp"
#include "torich/error.hpp"

using namespace torich;

namespace {

const FieldSpec kQ = FieldSpec::rationals();

struct Blowup {
  std::shared_ptr<const Fan> z = fixtures::blowup_p2();
  std::shared_ptr<const Fan> x = fixtures::p2();
  FanMorphism f = validate_fan_morphism(z, x);
  std::size_t corner = *x->find(RayMask{0b011});  // cone(e1, e2), the blown-up chart
  static constexpr std::size_t kExceptional = 3;
};

CartierData o(const std::shared_ptr<const Fan>& p2, Int d) {
  const std::vector<Int> a{0, 0, d};
  return cartier_from_divisor(p2, a);
}

FieldMatrix unit(std::size_t n) {
  FieldMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

std::vector<MVector> box(std::size_t rank, Int r) {
  std::vector<MVector> out;
  MVector m(std::vector<Int>(rank, -r));
  while (true) {
    out.push_back(m);
    std::size_t k = 0;
    while (k < rank && m[k] == r) m[k++] = -r;
    if (k == rank) return out;
    ++m[k];
  }
}

// Top log forms with zeros on A: ⟨v, m⟩ >= 1 on A and on rays off A ∪ B, >= 0 on B.
bool top_log_form_oracle(const Fan& z, const std::vector<std::size_t>& rays, const BoundaryData& ab, const MVector& m) {
  for (auto r : rays) {
    const bool in_b = std::find(ab.b.begin(), ab.b.end(), r) != ab.b.end();
    if (pairing(z.rays()[r], m) < (in_b ? 0 : 1)) return false;
  }
  return true;
}

std::vector<BoundaryData> shipped_boundaries() {
  return {{{}, {}}, {{0, 1, 2}, {Blowup::kExceptional}}, {{Blowup::kExceptional}, {}}, {{0}, {Blowup::kExceptional}},
          {{}, {0, 1, 2, Blowup::kExceptional}}};
}

}  // namespace

TEST_CASE("identity and blow-up morphisms validate") {
  auto p2 = fixtures::p2();
  const auto id = validate_fan_morphism(p2, p2);
  CHECK(id.is_identity());
  for (std::size_t c = 0; c < p2->size(); ++c) CHECK(id.image_cone(c) == c);
  CHECK(validate_fan_morphism(p2, p2, IntMatrix::identity(2)).is_identity());

  Blowup b;
  CHECK_FALSE(b.f.is_identity());
  // Containment oracle: every source generator lies in the dual-cut image cone.
  for (const auto& c : b.z->cones()) {
    const auto& t = b.x->cone(b.f.image_cone(c.id));
    for (const auto& g : c.generators)
      for (const auto& u : t.dual_generators) CHECK(pairing(g, u) >= 0);
  }
  CHECK(b.f.image_cone(*b.z->find(RayMask{1u << Blowup::kExceptional})) == b.corner);
  CHECK(b.f.fiber_cover(b.corner).size() == 2);
  for (auto c : b.x->max_cones())
    if (c != b.corner) CHECK(b.f.fiber_cover(c).size() == 1);
}

TEST_CASE("morphisms that are not subdivisions are rejected") {
  auto p2 = fixtures::p2();
  auto crossing = fixtures::make(2, {{1, 0}, {-1, 2}}, {{0, 1}});
  try {
    validate_fan_morphism(crossing, p2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotCompatible);
    CHECK(std::string(e.what()).find("cone{") != std::string::npos);
  }
  auto partial = fixtures::make(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(validate_fan_morphism(partial, p2), Error);
  auto half = fixtures::make(2, {{1, 0}, {0, 1}, {-1, -1}, {1, 1}}, {{0, 3}, {1, 2}, {2, 0}});
  CHECK_THROWS_AS(validate_fan_morphism(half, p2), Error);
  CHECK_THROWS_AS(validate_fan_morphism(p2, fixtures::p1()), Error);
  CHECK_THROWS_AS(validate_fan_morphism(p2, p2, IntMatrix::from_rows({{1, 1}, {0, 1}}, 2)), Error);
}

TEST_CASE("relative cohomology of the structure sheaf") {
  Blowup b;
  SheafModel model(SheafSpec::structure_on(whole_fan(b.z)), kQ);
  for (const auto& m : box(2, 3)) {
    for (auto c : b.x->max_cones()) {
      const std::size_t charts[1] = {c};
      const auto rel = relative_cohomology(b.f, model, charts, m);
      const auto dims = rel.dims();
      const bool in_dual = dual_contains(b.x->cone(c).generators, m);
      CHECK(dims[0] == (in_dual ? 1u : 0u));
      for (std::size_t j = 1; j < dims.size(); ++j) CHECK(dims[j] == 0);
    }
  }
}

TEST_CASE("relative top log forms match direct enumeration") {
  Blowup b;
  const auto ab = validate_boundary(*b.z, {Blowup::kExceptional}, {});
  SheafModel model(SheafSpec::log_forms(b.z, ab, 2), kQ);
  const std::vector<std::size_t> fiber_rays{0, 1, Blowup::kExceptional};
  const std::size_t charts[1] = {b.corner};
  for (const auto& m : box(2, 4)) {
    const auto dims = relative_cohomology(b.f, model, charts, m).dims();
    CHECK(dims[0] == (top_log_form_oracle(*b.z, fiber_rays, ab, m) ? 1u : 0u));
    CHECK(dims[1] == 0);
  }
}

TEST_CASE("induced maps compose") {
  Blowup b;
  const std::vector<SheafSpec> specs{SheafSpec::structure_on(whole_fan(b.z)), SheafSpec::danilov_forms(b.z, 1),
                                     SheafSpec::log_forms(b.z, validate_boundary(*b.z, {0}, {3}), 1)};
  const std::size_t ray = *b.x->find(RayMask{0b001});
  const std::size_t zero = b.x->zero_cone();
  for (const auto& spec : specs) {
    SheafModel model(spec, kQ);
    for (const auto& m : box(2, 2)) {
      const std::size_t top[1] = {b.corner}, mid[1] = {ray}, low[1] = {zero};
      const auto r_top = relative_cohomology(b.f, model, top, m);
      const auto r_mid = relative_cohomology(b.f, model, mid, m);
      const auto r_low = relative_cohomology(b.f, model, low, m);
      for (std::size_t j = 0; j < 2; ++j) {
        const auto a = induced_map(b.f, r_top, r_mid, j);
        const auto c = induced_map(b.f, r_mid, r_low, j);
        const auto direct = induced_map(b.f, r_top, r_low, j);
        CHECK(multiply(a, c, kQ) == direct);
        const auto self = induced_map(b.f, r_mid, r_mid, j);
        CHECK(self == unit(r_mid.dims()[j]));
      }
      CHECK_THROWS_AS(induced_map(b.f, r_low, r_top, 0), Error);
    }
  }
}

TEST_CASE("identity morphism reduces to sheaf cohomology") {
  auto p2 = fixtures::p2();
  const auto id = validate_fan_morphism(p2, p2);
  const std::vector<SheafSpec> specs{SheafSpec::structure_on(whole_fan(p2)),
                                     SheafSpec::structure_on(skeleton_star_set(p2, 1)),
                                     SheafSpec::danilov_forms(p2, 1), SheafSpec::ideal_of(skeleton_star_set(p2, 1)),
                                     SheafSpec::log_forms(p2, validate_boundary(*p2, {0}, {1}), 1)};
  for (const auto& spec : specs) {
    for (Int d : {-3, -1, 0, 1, 2}) {
      const auto l = o(p2, d);
      const auto table = twisted_direct_image_cohomology(id, spec, l, kQ);
      const auto direct = sheaf_cohomology(spec.twisted(l), kQ);
      CHECK(table.h[0] == direct.h);
      for (std::size_t j = 1; j < table.h.size(); ++j)
        for (auto v : table.h[j]) CHECK(v == 0);
    }
  }
}

TEST_CASE("blow-up direct images of O") {
  Blowup b;
  const auto spec = SheafSpec::structure_on(whole_fan(b.z));
  const auto table = twisted_direct_image_cohomology(b.f, spec, o(b.x, 1), kQ);
  CHECK(table.h[0] == std::vector<Int>{3, 0, 0});
  CHECK(table.h[1] == std::vector<Int>{0, 0, 0});
  CHECK(table.h[2] == std::vector<Int>{0, 0, 0});
  for (Int d : {-3, -2, 0, 2}) {
    const auto down = twisted_direct_image_cohomology(b.f, spec, o(b.x, d), kQ);
    CHECK(down.h[0] == sheaf_cohomology(line_bundle_spec(o(b.x, d)), kQ).h);
  }
}

TEST_CASE("Kollar-type vanishing on the blow-up") {
  Blowup b;
  for (const auto& ab : shipped_boundaries()) {
    for (std::size_t a : {0u, 1u, 2u}) {
      const auto spec = SheafSpec::log_forms(b.z, validate_boundary(*b.z, ab.a, ab.b), a);
      for (Int d : {1, 2}) {
        const auto table = twisted_direct_image_cohomology(b.f, spec, o(b.x, d), kQ);
        for (std::size_t j = 0; j < table.h.size(); ++j)
          for (std::size_t i = 1; i < table.h[j].size(); ++i) CHECK(table.h[j][i] == 0);
      }
    }
  }
}

TEST_CASE("top log forms with zeros along the boundary") {
  Blowup b;
  const auto spec = SheafSpec::log_forms(b.z, validate_boundary(*b.z, {0, 1, 2}, {Blowup::kExceptional}), 2);
  for (Int d : {1, 2}) {
    const auto table = twisted_direct_image_cohomology(b.f, spec, o(b.x, d), kQ);
    // Sections: weights m + d·anchor with ⟨v, m⟩ >= 1 on the three original rays, >= 0 on (1,1).
    Int count = 0;
    for (const auto& m : box(2, 6))
      if (m[0] >= 1 && m[1] >= 1 && -m[0] - m[1] + d >= 1 && m[0] + m[1] >= 0) ++count;
    CHECK(table.h[0][0] == count);
    // K_Z + E = f^*K_X + 2E: R^1 is a skyscraper at the centre. Two-chart Čech over
    // cone(e1, e2) has h^1(m) = 1 iff m1 <= 0, m2 <= 0, m1 + m2 >= 0, i.e. only at m = 0.
    CHECK(table.h[1] == std::vector<Int>{1, 0, 0});
    CHECK(table.h[2] == std::vector<Int>{0, 0, 0});
  }
}

TEST_CASE("Euler consistency with the pulled back bundle") {
  Blowup b;
  const std::vector<SheafSpec> specs{SheafSpec::structure_on(whole_fan(b.z)), SheafSpec::danilov_forms(b.z, 1),
                                     SheafSpec::danilov_forms(b.z, 2),
                                     SheafSpec::log_forms(b.z, validate_boundary(*b.z, {3}, {0}), 1),
                                     SheafSpec::structure_on(skeleton_star_set(b.z, 1))};
  for (const auto& spec : specs) {
    for (Int d : {-2, 0, 1}) {
      const auto l = o(b.x, d);
      const auto table = twisted_direct_image_cohomology(b.f, spec, l, kQ);
      const auto direct = sheaf_cohomology(spec.twisted(pull_back(l, b.z)), kQ);
      CHECK(table.euler_characteristic() == direct.euler_characteristic());
    }
  }
}

TEST_CASE("Frobenius inequality for direct images") {
  Blowup b;
  const std::vector<SheafSpec> specs{SheafSpec::structure_on(whole_fan(b.z)), SheafSpec::danilov_forms(b.z, 1),
                                     SheafSpec::log_forms(b.z, validate_boundary(*b.z, {3}, {}), 2)};
  for (const auto& spec : specs) {
    for (Int d : {-2, -1, 1}) {
      const auto l = o(b.x, d);
      const auto base = twisted_direct_image_cohomology(b.f, spec, l, kQ);
      for (Int power : {2, 3}) {
        const auto big = twisted_direct_image_cohomology(b.f, spec, l.power(power), kQ);
        for (std::size_t j = 0; j < base.h.size(); ++j)
          for (std::size_t i = 0; i < base.h[j].size(); ++i) CHECK(base.h[j][i] <= big.h[j][i]);
      }
    }
  }
}

TEST_CASE("direct image inputs are checked") {
  Blowup b;
  auto other = fixtures::p2();
  const auto spec = SheafSpec::structure_on(whole_fan(b.z));
  CHECK_THROWS_AS(twisted_direct_image_cohomology(b.f, spec, o(other, 1), kQ), Error);
  CHECK_THROWS_AS(twisted_direct_image_cohomology(b.f, SheafSpec::structure_on(whole_fan(other)), o(b.x, 1), kQ),
                  Error);
  auto a2 = fixtures::affine_a2();
  const auto id = validate_fan_morphism(a2, a2);
  try {
    twisted_direct_image_cohomology(id, SheafSpec::structure_on(whole_fan(a2)), CartierData::trivial(a2), kQ);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnbounded);
  }
  BoxPolicy boxed;
  boxed.explicit_radius = 2;
  const auto t = twisted_direct_image_cohomology(id, SheafSpec::structure_on(whole_fan(a2)),
                                                 CartierData::trivial(a2), kQ, boxed);
  CHECK(t.h[0][0] == sheaf_cohomology(SheafSpec::structure_on(whole_fan(a2)), kQ, boxed).h[0]);
}
