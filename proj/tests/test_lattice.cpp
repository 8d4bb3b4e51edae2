#include <random>

#include "doctest.h"
#include "torich/error.hpp"
#include "torich/lattice.hpp"
#include "torich/linalg.hpp"

using namespace torich;

namespace {

// Independent rank oracles: textbook Gauss-Jordan over mpq_class and over
// residues mod p.
std::size_t oracle_rank(const IntMatrix& a) {
  std::vector<std::vector<mpq_class>> m(a.rows(), std::vector<mpq_class>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m[i][j] = mpq_class(static_cast<long>(a(i, j)));
    }
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

std::size_t oracle_rank_mod(const IntMatrix& a, Int p) {
  std::vector<std::vector<Int>> m(a.rows(), std::vector<Int>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = ((a(i, j) % p) + p) % p;
  auto inv = [p](Int x) {
    for (Int y = 1; y < p; ++y)
      if (x * y % p == 1) return y;
    return Int{0};
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[r]);
    const Int iv = inv(m[r][c]);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Int f = m[i][c] * iv % p;
      for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("pairing and rank mismatch") {
  CHECK(pairing(NVector{1, 2, 3}, MVector{4, -5, 6}) == 12);
  try {
    pairing(NVector{1, 2}, MVector{1, 2, 3});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRankMismatch);
  }
}

TEST_CASE("checked arithmetic reports overflow") {
  CHECK_THROWS_AS(checked_mul(Int{1} << 40, Int{1} << 40), Error);
  try {
    checked_add(INT64_MAX, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOverflow);
    CHECK(std::string(e.what()).rfind("E_OVERFLOW", 0) == 0);
  }
}

TEST_CASE("primitive and gcd") {
  CHECK(primitive(NVector{4, -6, 8}) == NVector{2, -3, 4});
  CHECK(primitive(MVector{0, 0}) == MVector{0, 0});
  std::vector<Int> v{12, 18, -30};
  CHECK(gcd_of(v) == 6);
}

TEST_CASE("hermite normal form is canonical") {
  IntMatrix a = IntMatrix::from_rows({{2, 4}, {1, 3}}, 2);
  IntMatrix h = hermite_normal_form(a);
  CHECK(h == IntMatrix::from_rows({{1, 1}, {0, 2}}, 2));
  // Same lattice from different generators gives the same basis.
  IntMatrix b = IntMatrix::from_rows({{3, 5}, {1, 1}, {0, 2}}, 2);
  CHECK(Sublattice(2, a) == Sublattice(2, b));
}

TEST_CASE("sublattice membership agrees with brute force") {
  IntMatrix g = IntMatrix::from_rows({{2, 1, 0}, {0, 3, 3}}, 3);
  Sublattice l(3, g);
  for (Int x = -4; x <= 4; ++x)
    for (Int y = -4; y <= 4; ++y)
      for (Int z = -4; z <= 4; ++z) {
        bool brute = false;
        for (Int c1 = -6; c1 <= 6 && !brute; ++c1)
          for (Int c2 = -6; c2 <= 6 && !brute; ++c2)
            brute = (2 * c1 == x && c1 + 3 * c2 == y && 3 * c2 == z);
        CHECK(l.contains(MVector{x, y, z}) == brute);
      }
  CHECK_FALSE(l.is_saturated());
  CHECK(Sublattice(2, IntMatrix::from_rows({{1, 2}}, 2)).is_saturated());
}

TEST_CASE("perpendicular sublattice") {
  std::vector<NVector> rays{{1, 1}};
  Sublattice p = perp_sublattice(2, rays);
  CHECK(p.rank() == 1);
  CHECK(p.contains(MVector{1, -1}));
  CHECK(p.is_saturated());
  std::vector<NVector> rays3{{1, 2, 3}, {0, 1, 1}};
  Sublattice q = perp_sublattice(3, rays3);
  CHECK(q.rank() == 1);
  for (const auto& m : q.generators())
    for (const auto& v : rays3) CHECK(pairing(v, m) == 0);
  CHECK(q.is_saturated());
  std::vector<NVector> none;
  CHECK(perp_sublattice(2, none).rank() == 2);
}

TEST_CASE("adapted basis of a smooth cone") {
  std::vector<NVector> rays{{1, 1, 0}, {0, 1, 1}};
  AdaptedBasis b = adapted_basis(3, rays);
  REQUIRE(b.n_basis.size() == 3);
  CHECK(b.n_basis[0] == rays[0]);
  CHECK(b.n_basis[1] == rays[1]);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(pairing(b.n_basis[i], b.m_basis[j]) == (i == j ? 1 : 0));
  std::vector<NVector> singular{{1, 0}, {1, 2}};
  try {
    adapted_basis(2, singular);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotSmooth);
  }
}

TEST_CASE("wedge coordinates are minors") {
  std::vector<MVector> v{{1, 2, 3}, {4, 5, 6}};
  auto w = wedge_coordinates(v, 3);
  // subsets {0,1}, {0,2}, {1,2}
  REQUIRE(w.size() == 3);
  CHECK(w[0] == 1 * 5 - 2 * 4);
  CHECK(w[1] == 1 * 6 - 3 * 4);
  CHECK(w[2] == 2 * 6 - 3 * 5);
  CHECK(wedge_dimension(4, 2) == 6);
  CHECK(wedge_dimension(3, 0) == 1);
  CHECK(wedge_index(4, 0b1010) == 4);  // {1,3} after {0,1},{0,2},{0,3},{1,2}
}

TEST_CASE("wedge with m squares to zero") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 50; ++t) {
    MVector m{d(rng), d(rng), d(rng), d(rng)};
    for (std::size_t a = 0; a + 2 <= 4; ++a) {
      std::vector<Int> omega(wedge_dimension(4, a));
      for (auto& c : omega) c = d(rng);
      auto once = wedge_with(m, omega, 4, a);
      auto twice = wedge_with(m, once, 4, a + 1);
      for (Int c : twice) CHECK(c == 0);
    }
  }
  // e0 ^ e1 in the {0,1} slot, sign from moving past lower indices.
  std::vector<Int> e1{0, 1, 0};
  auto r = wedge_with(MVector{1, 0, 0}, e1, 3, 1);
  CHECK(r == std::vector<Int>{1, 0, 0});
  std::vector<Int> e0{1, 0, 0};
  auto s = wedge_with(MVector{0, 1, 0}, e0, 3, 1);
  CHECK(s == std::vector<Int>{-1, 0, 0});
}

TEST_CASE("exterior power of a perpendicular lattice stays independent mod p") {
  std::vector<NVector> rays{{1, 0, 0}};
  Sublattice p = perp_sublattice(3, rays);
  IntMatrix w = exterior_power_rows(p.basis(), 3, 2);
  CHECK(w.rows() == 1);
  CHECK(rank(w, FieldSpec::prime(2)) == 1);
}

TEST_CASE("rank kernels agree with independent elimination") {
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    IntMatrix a = random_matrix(rng, r, c, -2, 2);
    // Force some dependent rows.
    if (r > 2) {
      for (std::size_t j = 0; j < c; ++j) a(r - 1, j) = a(0, j) * 2 - a(1, j);
    }
    const std::size_t q = oracle_rank(a);
    CHECK(rank(a, FieldSpec::rationals()) == q);
    CHECK(rank_bigint(a) == q);
    for (Int p : {2, 3, 5}) CHECK(rank(a, FieldSpec::prime(p)) == oracle_rank_mod(a, p));
  }
}

TEST_CASE("rank falls back to big integers on overflow") {
  IntMatrix a(3, 3);
  const Int big = Int{1} << 40;
  a(0, 0) = big;
  a(0, 1) = big - 1;
  a(0, 2) = 3;
  a(1, 0) = big + 7;
  a(1, 1) = big;
  a(1, 2) = 1;
  for (std::size_t j = 0; j < 3; ++j) a(2, j) = a(0, j) - a(1, j);
  CHECK(rank(a, FieldSpec::rationals()) == rank_bigint(a));
  CHECK(rank_bigint(a) == 2);
}

TEST_CASE("rank of the empty matrix and characteristic effects") {
  CHECK(rank(IntMatrix(0, 3), FieldSpec::rationals()) == 0);
  CHECK(rank(IntMatrix(3, 0), FieldSpec::rationals()) == 0);
  IntMatrix two = IntMatrix::from_rows({{2}}, 1);
  CHECK(rank(two, FieldSpec::rationals()) == 1);
  CHECK(rank(two, FieldSpec::prime(2)) == 0);
}

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix::from_rows({{2, 1}, {1, 3}}, 2)) == 5);
  CHECK(determinant(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, 3)) == 0);
}

TEST_CASE("left kernel, coordinates and intersections") {
  const FieldSpec q = FieldSpec::rationals();
  FieldMatrix a = FieldMatrix::from_int(IntMatrix::from_rows({{1, 2}, {2, 4}, {0, 1}}, 2), q);
  FieldMatrix k = left_kernel(a, q);
  CHECK(k.rows() == 1);
  CHECK(multiply(k, a, q).is_zero());

  FieldMatrix basis = FieldMatrix::from_int(IntMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}, 3), q);
  FieldMatrix target = FieldMatrix::from_int(IntMatrix::from_rows({{2, 3, 5}}, 3), q);
  auto c = row_coordinates(basis, target, q);
  REQUIRE(c.has_value());
  CHECK((*c)(0, 0) == 2);
  CHECK((*c)(0, 1) == 3);
  FieldMatrix outside = FieldMatrix::from_int(IntMatrix::from_rows({{0, 0, 1}}, 3), q);
  CHECK_FALSE(row_coordinates(basis, outside, q).has_value());

  FieldMatrix other = FieldMatrix::from_int(IntMatrix::from_rows({{1, 1, 2}, {0, 0, 1}}, 3), q);
  FieldMatrix meet = intersect_row_spaces(basis, other, q);
  CHECK(meet.rows() == 1);
  CHECK(row_coordinates(basis, meet, q).has_value());
  CHECK(row_coordinates(other, meet, q).has_value());

  auto ext = extend_basis(basis, FieldMatrix::from_int(IntMatrix::from_rows({{1, 1, 2}, {0, 0, 1}}, 3), q), q);
  CHECK(ext == std::vector<std::size_t>{1});
}

TEST_CASE("field parsing") {
  CHECK(FieldSpec::parse("Q").is_rational());
  CHECK(FieldSpec::parse("F2").characteristic() == 2);
  CHECK(FieldSpec::parse("GF(7)").characteristic() == 7);
  try {
    FieldSpec::prime(4);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kField);
  }
  const FieldSpec f5 = FieldSpec::prime(5);
  CHECK(f5.mul(f5.from_int(3), f5.inv(f5.from_int(3))) == 1);
}
