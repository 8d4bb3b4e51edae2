#include "torich/lattice.hpp"

#include <bit>
#include <cassert>
#include <mutex>
#include <numeric>
#include <sstream>

#include "torich/error.hpp"
#include "torich/linalg.hpp"

namespace torich {

std::string to_string(std::span<const Int> coords) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
  os << ')';
  return os.str();
}

Int pairing(const NVector& v, const MVector& m) {
  if (v.rank() != m.rank())
    throw Error(ErrorCode::kRankMismatch, "pairing of rank " + std::to_string(v.rank()) + " with rank " +
                                              std::to_string(m.rank()));
  Int s = 0;
  for (std::size_t i = 0; i < v.rank(); ++i) s = checked_add(s, checked_mul(v[i], m[i]));
  return s;
}

Int gcd_of(std::span<const Int> coords) {
  Int g = 0;
  for (Int c : coords) g = std::gcd(g, c);
  return g;
}

template <class Tag>
LatticeVector<Tag> primitive(const LatticeVector<Tag>& v) {
  const Int g = gcd_of(v.coords());
  if (g <= 1) return v;
  LatticeVector<Tag> r(v);
  for (std::size_t i = 0; i < r.rank(); ++i) r[i] /= g;
  return r;
}
template NVector primitive(const NVector&);
template MVector primitive(const MVector&);

namespace {

using BigRows = std::vector<std::vector<mpz_class>>;

BigRows to_big(const IntMatrix& m) {
  BigRows out(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = static_cast<long>(m(r, c));
  return out;
}

IntMatrix from_big(const BigRows& rows, std::size_t cols) {
  IntMatrix out(0, cols);
  for (const auto& r : rows) {
    auto dst = out.append_zero_row();
    for (std::size_t c = 0; c < cols; ++c) {
      if (!r[c].fits_slong_p()) throw Error(ErrorCode::kOverflow, "lattice coordinate exceeds 64 bits");
      dst[c] = r[c].get_si();
    }
  }
  return out;
}

// Column operations on `a` (rows x cols), mirrored on `v` (cols x cols), so
// that a * v has its nonzero columns packed to the left. Returns the rank.
std::size_t column_reduce(BigRows& a, BigRows& v, std::size_t cols) {
  std::size_t t = 0;
  for (std::size_t i = 0; i < a.size() && t < cols; ++i) {
    for (std::size_t c = t + 1; c < cols; ++c) {
      if (a[i][c] == 0) continue;
      mpz_class g, s, u;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), a[i][t].get_mpz_t(), a[i][c].get_mpz_t());
      const mpz_class x = a[i][t] / g, y = a[i][c] / g;
      // [col_t, col_c] <- [s*col_t + u*col_c, -y*col_t + x*col_c]; det = s*x + u*y = 1.
      auto mix = [&](BigRows& m) {
        for (auto& row : m) {
          const mpz_class p = row[t], q = row[c];
          row[t] = s * p + u * q;
          row[c] = -y * p + x * q;
        }
      };
      mix(a);
      mix(v);
    }
    if (a[i][t] != 0) ++t;
  }
  return t;
}

BigRows identity_big(std::size_t n) {
  BigRows id(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

}  // namespace

IntMatrix hermite_normal_form(const IntMatrix& rows) {
  BigRows a = to_big(rows);
  const std::size_t cols = rows.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      mpz_class g, s, u;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), a[r][c].get_mpz_t(), a[i][c].get_mpz_t());
      const mpz_class x = a[r][c] / g, y = a[i][c] / g;
      for (std::size_t j = 0; j < cols; ++j) {
        const mpz_class p = a[r][j], q = a[i][j];
        a[r][j] = s * p + u * q;
        a[i][j] = -y * p + x * q;
      }
    }
    if (a[r][c] == 0) continue;
    if (a[r][c] < 0)
      for (auto& e : a[r]) e = -e;
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return from_big(a, cols);
}

Sublattice::Sublattice(std::size_t ambient_rank, const IntMatrix& generators)
    : ambient_rank_(ambient_rank), basis_(hermite_normal_form(generators.rows() ? generators : IntMatrix(0, ambient_rank))) {
  if (generators.rows() && generators.cols() != ambient_rank)
    throw Error(ErrorCode::kRankMismatch, "sublattice generators have wrong rank");
}

std::vector<MVector> Sublattice::generators() const {
  std::vector<MVector> out;
  for (std::size_t r = 0; r < basis_.rows(); ++r)
    out.emplace_back(std::vector<Int>(basis_.row(r).begin(), basis_.row(r).end()));
  return out;
}

bool Sublattice::contains(const MVector& m) const {
  IntMatrix g = basis_;
  g.append_row(m.coords());
  return hermite_normal_form(g) == basis_;
}

bool Sublattice::contains(const Sublattice& other) const {
  IntMatrix g = basis_;
  for (std::size_t r = 0; r < other.basis_.rows(); ++r) g.append_row(other.basis_.row(r));
  return hermite_normal_form(g) == basis_;
}

bool Sublattice::is_saturated() const { return rank() == 0 || gcd_of_maximal_minors(basis_) == 1; }

mpz_class gcd_of_maximal_minors(const IntMatrix& rows) {
  const std::size_t k = rows.rows(), n = rows.cols();
  if (k == 0) return 1;
  if (k > n) return 0;
  mpz_class g = 0;
  for (unsigned mask : wedge_subsets(n, k)) {
    IntMatrix minor(k, k);
    std::size_t col = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask >> c & 1u)) continue;
      for (std::size_t r = 0; r < k; ++r) minor(r, col) = rows(r, c);
      ++col;
    }
    mpz_class d = determinant(minor);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
  }
  return g;
}

Sublattice perp_sublattice(std::size_t rank, std::span<const NVector> rays) {
  IntMatrix r(0, rank);
  for (const auto& v : rays) {
    if (v.rank() != rank) throw Error(ErrorCode::kRankMismatch, "ray of wrong rank");
    r.append_row(v.coords());
  }
  BigRows a = to_big(r);
  BigRows v = identity_big(rank);
  const std::size_t rk = column_reduce(a, v, rank);
  IntMatrix kernel(0, rank);
  for (std::size_t c = rk; c < rank; ++c) {
    auto row = kernel.append_zero_row();
    for (std::size_t i = 0; i < rank; ++i) {
      if (!v[i][c].fits_slong_p()) throw Error(ErrorCode::kOverflow, "kernel coordinate exceeds 64 bits");
      row[i] = v[i][c].get_si();
    }
  }
  return Sublattice(rank, kernel);
}

AdaptedBasis adapted_basis(std::size_t rank, std::span<const NVector> cone_rays) {
  IntMatrix r(0, rank);
  for (const auto& v : cone_rays) {
    if (v.rank() != rank) throw Error(ErrorCode::kRankMismatch, "ray of wrong rank");
    r.append_row(v.coords());
  }
  const std::size_t k = cone_rays.size();
  if (k > rank || gcd_of_maximal_minors(r) != 1)
    throw Error(ErrorCode::kNotSmooth, "rays do not extend to a basis of N");
  BigRows a = to_big(r);
  BigRows v = identity_big(rank);
  column_reduce(a, v, rank);
  // Rows of V^{-1} form a basis of N whose first k rows span the rays.
  FieldMatrix vq(rank, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) vq(i, j) = v[i][j];
  const FieldSpec q = FieldSpec::rationals();
  FieldMatrix aug(rank, 2 * rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      aug(i, j) = vq(i, j);
      aug(i, rank + j) = i == j ? 1 : 0;
    }
  rref(aug, q);
  AdaptedBasis out;
  out.n_basis.assign(cone_rays.begin(), cone_rays.end());
  for (std::size_t i = k; i < rank; ++i) {
    std::vector<Int> row(rank);
    for (std::size_t j = 0; j < rank; ++j) row[j] = aug(i, rank + j).get_num().get_si();
    out.n_basis.emplace_back(std::move(row));
  }
  // Dual basis: rows of (B_N^{-1})^T.
  FieldMatrix bn(rank, 2 * rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      bn(i, j) = static_cast<long>(out.n_basis[i][j]);
      bn(i, rank + j) = i == j ? 1 : 0;
    }
  rref(bn, q);
  for (std::size_t j = 0; j < rank; ++j) {
    std::vector<Int> row(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      const mpq_class& e = bn(i, rank + j);
      if (e.get_den() != 1) throw Error(ErrorCode::kNotSmooth, "completed basis is not unimodular");
      row[i] = e.get_num().get_si();
    }
    out.m_basis.emplace_back(std::move(row));
  }
  return out;
}

// --- exterior powers -------------------------------------------------------

namespace {

constexpr std::size_t kMaxWedgeRank = 10;

struct WedgeTables {
  std::vector<std::vector<std::vector<unsigned>>> subsets;  // [n][a]
  std::vector<std::vector<std::size_t>> index;              // [n][mask]
  WedgeTables() : subsets(kMaxWedgeRank + 1), index(kMaxWedgeRank + 1) {
    for (std::size_t n = 0; n <= kMaxWedgeRank; ++n) {
      subsets[n].resize(n + 1);
      index[n].assign(std::size_t{1} << n, 0);
      // Lexicographic order on increasing index sequences.
      for (std::size_t a = 0; a <= n; ++a) {
        std::vector<unsigned> out;
        std::vector<std::size_t> idx(a);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
          unsigned mask = 0;
          for (auto i : idx) mask |= 1u << i;
          out.push_back(mask);
          std::size_t pos = a;
          while (pos > 0 && idx[pos - 1] == n - a + pos - 1) --pos;
          if (pos == 0) break;
          ++idx[pos - 1];
          for (std::size_t j = pos; j < a; ++j) idx[j] = idx[j - 1] + 1;
        }
        for (std::size_t i = 0; i < out.size(); ++i) index[n][out[i]] = i;
        subsets[n][a] = std::move(out);
      }
    }
  }
};

const WedgeTables& wedge_tables() {
  static const WedgeTables tables;
  return tables;
}

}  // namespace

const std::vector<unsigned>& wedge_subsets(std::size_t n, std::size_t a) {
  assert(n <= kMaxWedgeRank && a <= n);
  return wedge_tables().subsets[n][a];
}

std::size_t wedge_dimension(std::size_t n, std::size_t a) { return a > n ? 0 : wedge_subsets(n, a).size(); }

std::size_t wedge_index(std::size_t n, unsigned mask) { return wedge_tables().index[n][mask]; }

std::vector<Int> wedge_coordinates(std::span<const MVector> vectors, std::size_t rank) {
  const std::size_t a = vectors.size();
  if (a > rank) return {};
  const auto& subsets = wedge_subsets(rank, a);
  std::vector<Int> out(subsets.size(), 0);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    IntMatrix minor(a, a);
    std::size_t col = 0;
    for (std::size_t c = 0; c < rank; ++c) {
      if (!(subsets[s] >> c & 1u)) continue;
      for (std::size_t r = 0; r < a; ++r) minor(r, col) = vectors[r][c];
      ++col;
    }
    const mpz_class d = determinant(minor);
    if (!d.fits_slong_p()) throw Error(ErrorCode::kOverflow, "wedge coordinate exceeds 64 bits");
    out[s] = d.get_si();
  }
  return out;
}

std::vector<Int> wedge_coordinates(std::span<const MVector> vectors, std::size_t rank, const FieldSpec& field) {
  auto out = wedge_coordinates(vectors, rank);
  for (auto& v : out) v = field.reduce(v);
  return out;
}

std::vector<Int> wedge_with(const MVector& m, std::span<const Int> omega, std::size_t rank, std::size_t a) {
  if (a + 1 > rank) return {};
  const auto& subsets = wedge_subsets(rank, a);
  std::vector<Int> out(wedge_dimension(rank, a + 1), 0);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (omega[s] == 0) continue;
    const unsigned mask = subsets[s];
    for (std::size_t j = 0; j < rank; ++j) {
      if (mask >> j & 1u || m[j] == 0) continue;
      // e_j ^ e_S = (-1)^{#{i in S : i < j}} e_{S + j}
      const int below = std::popcount(mask & ((1u << j) - 1u));
      const Int term = checked_mul(m[j], omega[s]);
      const std::size_t t = wedge_index(rank, mask | (1u << j));
      out[t] = (below % 2) ? checked_sub(out[t], term) : checked_add(out[t], term);
    }
  }
  return out;
}

IntMatrix exterior_power_rows(const IntMatrix& basis, std::size_t rank, std::size_t a) {
  IntMatrix out(0, wedge_dimension(rank, a));
  if (a > basis.rows()) return out;
  std::vector<MVector> chosen(a);
  for (unsigned mask : wedge_subsets(basis.rows(), a)) {
    std::size_t k = 0;
    for (std::size_t r = 0; r < basis.rows(); ++r)
      if (mask >> r & 1u) chosen[k++] = MVector(std::vector<Int>(basis.row(r).begin(), basis.row(r).end()));
    out.append_row(wedge_coordinates(chosen, rank));
  }
  return out;
}

}  // namespace torich
