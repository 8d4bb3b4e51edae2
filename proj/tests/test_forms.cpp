#include "doctest.h"
#include "fixtures.hpp"
#include "torich/error.hpp"
#include "torich/forms.hpp"

using namespace torich;

namespace {

const FieldSpec kQ = FieldSpec::rationals();

std::vector<MVector> weight_box(std::size_t n, Int r) {
  std::vector<MVector> out;
  MVector m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = -r;
  while (true) {
    out.push_back(m);
    std::size_t j = 0;
    while (j < n && m[j] == r) {
      m[j] = -r;
      ++j;
    }
    if (j == n) break;
    ++m[j];
  }
  return out;
}

bool same_span(const IntMatrix& a, const IntMatrix& b, const FieldSpec& f) {
  if (a.rows() != b.rows()) return false;
  if (a.rows() == 0) return true;
  IntMatrix both = a;
  for (std::size_t r = 0; r < b.rows(); ++r) both.append_row(b.row(r));
  return rank(a, f) == a.rows() && rank(both, f) == a.rows();
}

bool contained(const IntMatrix& small, const IntMatrix& big, const FieldSpec& f) {
  if (small.rows() == 0) return true;
  IntMatrix both = big;
  for (std::size_t r = 0; r < small.rows(); ++r) both.append_row(small.row(r));
  return rank(both, f) == rank(big, f);
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::shared_ptr<const Fan> affine_line() { return fixtures::make(1, {{1}}, {{0}}); }

StarSet nonzero_faces(std::shared_ptr<const Fan> fan) { return skeleton_star_set(std::move(fan), 1); }

std::vector<std::shared_ptr<const Fan>> all_fixtures() {
  return {fixtures::p1(),    fixtures::p2(),        fixtures::p1xp1(),     fixtures::p3(),
          fixtures::p112(),  fixtures::blowup_p2(), fixtures::affine_a3(), fixtures::affine_a2()};
}

}  // namespace

TEST_CASE("Ishida components on the positive quadrant") {
  auto fan = fixtures::affine_a2();
  const std::size_t g = *fan->find(RayMask{0b11});
  auto spec = SheafSpec::danilov_forms(fan, 1);
  auto c = chart_weight_component(spec, g, MVector{2, 0}, kQ);
  CHECK(c.dim() == 1);
  CHECK(c.basis == IntMatrix::from_rows({{1, 0}}, 2));
  CHECK(chart_weight_component(spec, g, MVector{1, 1}, kQ).dim() == 2);
  CHECK(chart_weight_component(spec, g, MVector{-1, 1}, kQ).dim() == 0);
}

TEST_CASE("structure sheaf of the boundary kills interior weights") {
  auto fan = fixtures::affine_a2();
  const std::size_t g = *fan->find(RayMask{0b11});
  auto spec = SheafSpec::structure_on(nonzero_faces(fan));
  CHECK(chart_weight_component(spec, g, MVector{1, 1}, kQ).dim() == 0);
  CHECK(chart_weight_component(spec, g, MVector{1, 0}, kQ).dim() == 1);
  CHECK(chart_weight_component(spec, g, MVector{0, 0}, kQ).dim() == 1);
}

TEST_CASE("log forms on the affine line") {
  auto fan = affine_line();
  auto spec = SheafSpec::log_forms(fan, BoundaryData{{0}, {}}, 1);
  const std::size_t g = fan->ray_cone(0);
  auto c1 = chart_weight_component(spec, g, MVector{1}, kQ);
  CHECK(c1.basis == IntMatrix::from_rows({{1}}, 1));
  CHECK(chart_weight_component(spec, g, MVector{0}, kQ).dim() == 0);
  // Pure log pole: dx/x survives at weight 0.
  auto b = SheafSpec::log_forms(fan, BoundaryData{{}, {0}}, 1);
  CHECK(chart_weight_component(b, g, MVector{0}, kQ).dim() == 1);
  CHECK(chart_weight_component(b, g, MVector{-1}, kQ).dim() == 0);
  // No boundary: dx needs weight >= 1.
  auto none = SheafSpec::log_forms(fan, BoundaryData{}, 1);
  CHECK(chart_weight_component(none, g, MVector{0}, kQ).dim() == 0);
  CHECK(chart_weight_component(none, g, MVector{1}, kQ).dim() == 1);
}

TEST_CASE("Ishida components match the direct definition") {
  for (const auto& fan : all_fixtures()) {
    const std::size_t n = fan->rank();
    for (std::size_t a = 0; a <= n; ++a) {
      SheafModel model(SheafSpec::danilov_forms(fan, a), kQ);
      for (const auto& m : weight_box(n, 2))
        for (const auto& c : fan->cones()) {
          bool dual = true;
          std::vector<NVector> rho;
          for (const auto& v : c.generators) {
            const Int p = pairing(v, m);
            dual = dual && p >= 0;
            if (p == 0) rho.push_back(v);
          }
          const IntMatrix comp = model.component(c.id, m);
          if (!dual) {
            CHECK(comp.rows() == 0);
            continue;
          }
          const std::size_t rho_dim = rank(IntMatrix::from_rows([&] {
                                                std::vector<std::vector<Int>> rows;
                                                for (const auto& v : rho) rows.push_back(v.vec());
                                                return rows;
                                              }(), n), kQ);
          CHECK(comp.rows() == binom(n - rho_dim, a));
          CHECK(rank(comp, kQ) == comp.rows());
          if (a == 1)
            for (std::size_t r = 0; r < comp.rows(); ++r)
              for (const auto& v : rho) CHECK(pairing(v, MVector(std::vector<Int>(comp.row(r).begin(), comp.row(r).end()))) == 0);
        }
    }
  }
}

TEST_CASE("structure sheaf rule agrees with the literal star condition") {
  auto fan = fixtures::p3();
  // Phi = star(e1) ∪ star(cone(e2, e3)).
  const std::size_t e1 = fan->ray_cone(0);
  const std::size_t e23 = *fan->find(RayMask{0b0110});
  std::vector<std::size_t> ids;
  for (const auto& c : fan->cones())
    if (fan->is_face(e1, c.id) || fan->is_face(e23, c.id)) ids.push_back(c.id);
  StarSet phi = validate_star_set(fan, ids);
  SheafModel oy(SheafSpec::structure_on(phi), kQ);
  SheafModel iy(SheafSpec::ideal_of(phi), kQ);
  SheafModel ox(SheafSpec::structure_on(whole_fan(fan)), kQ);
  SheafModel ish0(SheafSpec::ishida_forms(phi, 0), kQ);
  for (const auto& m : weight_box(3, 2))
    for (const auto& g : fan->cones()) {
      bool dual = true;
      for (const auto& v : g.generators) dual = dual && pairing(v, m) >= 0;
      bool literal = false;
      if (dual)
        for (auto s : g.face_ids) {
          if (!phi.contains(s)) continue;
          bool perp = true;
          for (const auto& v : fan->cone(s).generators) perp = perp && pairing(v, m) == 0;
          literal = literal || perp;
        }
      const std::size_t dy = oy.component(g.id, m).rows();
      CHECK(dy == (literal ? 1u : 0u));
      CHECK(ish0.component(g.id, m) == oy.component(g.id, m));
      CHECK(dy + iy.component(g.id, m).rows() == ox.component(g.id, m).rows());
    }
}

TEST_CASE("log forms without boundary are Danilov forms") {
  for (const auto& fan : {fixtures::p2(), fixtures::p1xp1(), fixtures::p3(), fixtures::blowup_p2(),
                          fixtures::p112(), fixtures::affine_a3()}) {
    const std::size_t n = fan->rank();
    for (std::size_t a = 0; a <= n; ++a) {
      SheafModel log(SheafSpec::log_forms(fan, BoundaryData{}, a), kQ);
      SheafModel dan(SheafSpec::danilov_forms(fan, a), kQ);
      for (const auto& m : weight_box(n, 2))
        for (const auto& c : fan->cones()) CHECK(same_span(log.component(c.id, m), dan.component(c.id, m), kQ));
    }
  }
}

TEST_CASE("top-degree log forms are the line bundle O(K + B)") {
  for (const auto& fan : {fixtures::p2(), fixtures::p1xp1(), fixtures::blowup_p2()}) {
    const std::size_t n = fan->rank();
    const std::size_t r = fan->rays().size();
    for (RayMask amask = 0; amask < (RayMask{1} << r); ++amask)
      for (RayMask bmask = 0; bmask < (RayMask{1} << r); ++bmask) {
        if (amask & bmask) continue;
        BoundaryData bd;
        std::vector<Int> div(r);
        for (std::size_t i = 0; i < r; ++i) {
          if (amask >> i & 1u) bd.a.push_back(i);
          if (bmask >> i & 1u) bd.b.push_back(i);
          div[i] = (bmask >> i & 1u) ? 0 : -1;
        }
        SheafModel log(SheafSpec::log_forms(fan, bd, n), kQ);
        SheafModel lb(SheafSpec::structure_on(whole_fan(fan)).twisted(cartier_from_divisor(fan, div)), kQ);
        for (const auto& m : weight_box(n, 2))
          for (const auto& c : fan->cones()) CHECK(log.component(c.id, m).rows() == lb.component(c.id, m).rows());
      }
  }
}

TEST_CASE("restriction maps are inclusions or zero") {
  auto fan = fixtures::affine_a2();
  const std::size_t g = *fan->find(RayMask{0b11});
  const std::size_t e1 = fan->ray_cone(0);
  auto spec = SheafSpec::danilov_forms(fan, 1);
  FieldMatrix r = restriction_map(spec, g, e1, MVector{0, 1}, kQ);
  CHECK(r.rows() == 1);
  CHECK(r.cols() == 1);
  FieldMatrix id = restriction_map(spec, g, g, MVector{1, 1}, kQ);
  CHECK(id.rows() == 2);
  CHECK(id(0, 0) == 1);
  CHECK(id(1, 1) == 1);
  CHECK(id(0, 1) == 0);
  try {
    restriction_map(spec, e1, g, MVector{0, 1}, kQ);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFace);
  }

  // Triangle polyhedron in P^2: allowed on a 2D chart, killed on a ray chart.
  auto p2 = fixtures::p2();
  auto oy = SheafSpec::structure_on(nonzero_faces(p2));
  const std::size_t s01 = *p2->find(RayMask{0b011});
  FieldMatrix kill = restriction_map(oy, s01, p2->ray_cone(0), MVector{1, 0}, kQ);
  CHECK(kill.rows() == 1);
  CHECK(kill.cols() == 0);
}

TEST_CASE("restriction is always a subspace inclusion where the target survives") {
  for (const auto& fan : all_fixtures())
    for (std::size_t a = 0; a <= fan->rank(); ++a) {
      std::vector<SheafModel> models;
      models.emplace_back(SheafSpec::danilov_forms(fan, a), kQ);
      models.emplace_back(SheafSpec::ishida_forms(nonzero_faces(fan), a), kQ);
      models.emplace_back(SheafSpec::log_forms(fan, BoundaryData{{0}, {1}}, a), kQ);
      for (const auto& model : models)
        for (const auto& m : weight_box(fan->rank(), 2))
          for (const auto& g : fan->cones())
            for (auto d : g.face_ids) {
              const IntMatrix src = model.component(g.id, m);
              const IntMatrix dst = model.component(d, m);
              if (dst.rows() > 0) CHECK(contained(src, dst, kQ));
            }
    }
}

TEST_CASE("exterior derivative") {
  std::vector<Int> one{1};
  CHECK(exterior_derivative(MVector{1, 0}, one, 0, kQ) == std::vector<Int>{1, 0});
  std::vector<Int> top{1};
  CHECK(exterior_derivative(MVector{1, 0}, top, 2, kQ).empty());
  // Characteristic p kills weights divisible by p.
  CHECK(exterior_derivative(MVector{2, 4}, one, 0, FieldSpec::prime(2)) == std::vector<Int>{0, 0});
  const IntMatrix w0 = wedge_operator(MVector{1, 2, 3}, 3, 0);
  const IntMatrix w1 = wedge_operator(MVector{1, 2, 3}, 3, 1);
  CHECK((w0 * w1).is_zero());
}

TEST_CASE("d preserves Ishida components and commutes with restriction") {
  for (const auto& fan : all_fixtures()) {
    const std::size_t n = fan->rank();
    std::vector<StarSet> phis{whole_fan(fan), nonzero_faces(fan)};
    for (const auto& phi : phis)
      for (std::size_t a = 0; a < n; ++a) {
        SheafModel lo(SheafSpec::ishida_forms(phi, a), kQ);
        SheafModel hi(SheafSpec::ishida_forms(phi, a + 1), kQ);
        for (const auto& m : weight_box(n, 2))
          for (const auto& g : fan->cones()) {
            const IntMatrix src = lo.component(g.id, m);
            IntMatrix img(0, hi.ambient_dim());
            for (std::size_t r = 0; r < src.rows(); ++r) img.append_row(exterior_derivative(m, src.row(r), a, kQ));
            CHECK(contained(img, hi.component(g.id, m), kQ));
            for (auto d : g.face_ids) {
              // res(d w) versus d(res w), with the kill rule on both sides.
              const bool lo_alive = lo.component(d, m).rows() > 0;
              const bool hi_alive = hi.component(d, m).rows() > 0;
              for (std::size_t r = 0; r < img.rows(); ++r) {
                bool nonzero = false;
                for (Int x : img.row(r)) nonzero = nonzero || x != 0;
                const bool lhs = hi_alive && nonzero;
                const bool rhs = lo_alive && nonzero;
                CHECK(lhs == rhs);
              }
            }
          }
      }
  }
}

TEST_CASE("twists shift the weight by the chart anchor") {
  auto fan = fixtures::p2();
  std::vector<Int> h{0, 0, 1};
  CartierData o1 = cartier_from_divisor(fan, h);
  auto base = SheafSpec::danilov_forms(fan, 1);
  SheafModel plain(base, kQ);
  SheafModel tw(base.twisted(o1), kQ);
  SheafModel trivial(base.twisted(CartierData::trivial(fan)), kQ);
  for (const auto& m : weight_box(2, 3))
    for (const auto& c : fan->cones()) {
      CHECK(tw.component(c.id, m) == plain.component(c.id, m - o1.anchor(c.id)));
      CHECK(trivial.component(c.id, m) == plain.component(c.id, m));
    }
  // Nested twists collapse into one Cartier sum.
  auto twice = base.twisted(o1).twisted(o1);
  CHECK(*twice.twist() == o1.power(2));
  CHECK(twice.untwisted().twist() == std::nullopt);
}

TEST_CASE("prime field components stay independent") {
  auto fan = fixtures::p3();
  for (Int p : {2, 3}) {
    const FieldSpec f = FieldSpec::prime(p);
    for (std::size_t a = 0; a <= 3; ++a) {
      SheafModel model(SheafSpec::danilov_forms(fan, a), f);
      for (const auto& m : weight_box(3, 1))
        for (const auto& c : fan->cones()) {
          const IntMatrix comp = model.component(c.id, m);
          CHECK(rank(comp, f) == comp.rows());
        }
    }
  }
}

TEST_CASE("forms errors") {
  auto fan = fixtures::p2();
  auto spec = SheafSpec::danilov_forms(fan, 1);
  try {
    chart_weight_component(spec, 99, MVector{0, 0}, kQ);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kChart);
  }
  CHECK_THROWS_AS(SheafSpec::danilov_forms(fan, 3), Error);
  CHECK_THROWS_AS(SheafSpec::structure_on(whole_fan(fan)).with_degree(1), Error);
  CHECK_THROWS_AS(SheafSpec::log_forms(fan, BoundaryData{{0}, {0}}, 1), Error);
  auto other = fixtures::p2();
  CHECK_THROWS_AS(spec.twisted(CartierData::trivial(other)), Error);
}
