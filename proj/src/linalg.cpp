#include "torich/linalg.hpp"

#include <cassert>
#include <utility>

#include "torich/error.hpp"

namespace torich {

namespace {

struct Int128Overflow {};

Int fit_int64(__int128 v) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN)) throw Int128Overflow{};
  return static_cast<Int>(v);
}

std::size_t bareiss_rank_int64(std::vector<Int> a, std::size_t rows, std::size_t cols) {
  auto at = [&](std::size_t r, std::size_t c) -> Int& { return a[r * cols + c]; };
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
    const Int p = at(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Int f = at(i, c);
      for (std::size_t j = c + 1; j < cols; ++j) {
        const __int128 num = static_cast<__int128>(p) * at(i, j) - static_cast<__int128>(f) * at(r, j);
        at(i, j) = fit_int64(num / prev);
      }
      at(i, c) = 0;
    }
    prev = p;
    ++r;
  }
  return r;
}

Int inverse_mod(Int a, Int p) {
  Int t = 0, new_t = 1, rr = p, new_r = a;
  while (new_r != 0) {
    const Int q = rr / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(rr, new_r) = std::make_pair(new_r, rr - q * new_r);
  }
  return t < 0 ? t + p : t;
}

std::size_t rank_mod_p(const IntMatrix& m, Int p) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Int> a(m.data());
  for (auto& v : a) {
    v %= p;
    if (v < 0) v += p;
  }
  auto at = [&](std::size_t r, std::size_t c) -> Int& { return a[r * cols + c]; };
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
    const Int inv = inverse_mod(at(r, c), p);
    for (std::size_t j = c; j < cols; ++j) at(r, j) = static_cast<Int>((static_cast<__int128>(at(r, j)) * inv) % p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Int f = at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        Int v = static_cast<Int>((at(i, j) - static_cast<__int128>(f) * at(r, j)) % p);
        at(i, j) = v < 0 ? v + p : v;
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank_bigint(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<mpz_class> a(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) a[i] = static_cast<long>(m.data()[i]);
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * cols + c]; };
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class num = at(r, c) * at(i, j) - at(i, c) * at(r, j);
        mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

std::size_t rank(const IntMatrix& m, const FieldSpec& field) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!field.is_rational()) return rank_mod_p(m, field.characteristic());
  try {
    return bareiss_rank_int64(m.data(), m.rows(), m.cols());
  } catch (const Int128Overflow&) {
    return rank_bigint(m);
  }
}

mpz_class determinant(const IntMatrix& m) {
  assert(m.rows() == m.cols());
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<mpz_class> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = static_cast<long>(m.data()[i]);
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * n + c]; };
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && at(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = at(k, k) * at(i, j) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

// ---------------------------------------------------------------------------

FieldMatrix FieldMatrix::from_int(const IntMatrix& m, const FieldSpec& field) {
  FieldMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = field.from_int(m(r, c));
  return out;
}

void FieldMatrix::append_row(const std::vector<mpq_class>& values) {
  assert(values.size() == cols_);
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void FieldMatrix::append_rows(const FieldMatrix& other) {
  assert(other.cols_ == cols_ || other.rows_ == 0);
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

std::vector<mpq_class> FieldMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

FieldMatrix FieldMatrix::select_rows(const std::vector<std::size_t>& indices) const {
  FieldMatrix out(0, cols_);
  for (auto i : indices) out.append_row(row(i));
  return out;
}

bool FieldMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b, const FieldSpec& field) {
  assert(a.cols() == b.rows());
  FieldMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c)
        if (b(k, c) != 0) out(r, c) += a(r, k) * b(k, c);
    }
  if (!field.is_rational())
    for (std::size_t r = 0; r < out.rows(); ++r)
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = field.normalize(out(r, c));
  return out;
}

std::vector<std::size_t> rref(FieldMatrix& m, const FieldSpec& field) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const mpq_class inv = field.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = field.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const mpq_class f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) = field.sub(m(i, j), field.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(const FieldMatrix& m, const FieldSpec& field) {
  FieldMatrix copy = m;
  return rref(copy, field).size();
}

namespace {

FieldMatrix transpose(const FieldMatrix& a) {
  FieldMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

}  // namespace

FieldMatrix left_kernel(const FieldMatrix& a, const FieldSpec& field) {
  // x * a = 0  <=>  a^T * x^T = 0.
  FieldMatrix t = transpose(a);
  const auto pivots = rref(t, field);
  const std::size_t n = a.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  FieldMatrix basis(0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> v(n);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.sub(0, t(i, free));
    basis.append_row(v);
  }
  return basis;
}

std::optional<FieldMatrix> row_coordinates(const FieldMatrix& basis, const FieldMatrix& targets,
                                           const FieldSpec& field) {
  const std::size_t k = basis.rows(), n = basis.cols(), t = targets.rows();
  assert(targets.cols() == n || t == 0);
  FieldMatrix aug(n, k + t);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < n; ++c) aug(c, i) = basis(i, c);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t c = 0; c < n; ++c) aug(c, k + i) = targets(i, c);
  const auto pivots = rref(aug, field);
  for (auto p : pivots)
    if (p >= k) return std::nullopt;
  assert(pivots.size() == k);
  FieldMatrix coords(t, k);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < k; ++j) coords(i, j) = aug(j, k + i);
  return coords;
}

FieldMatrix intersect_row_spaces(const FieldMatrix& a, const FieldMatrix& b, const FieldSpec& field) {
  const std::size_t n = a.rows() ? a.cols() : b.cols();
  if (a.rows() == 0 || b.rows() == 0) return FieldMatrix(0, n);
  FieldMatrix stacked(0, n);
  stacked.append_rows(a);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    auto row = b.row(r);
    for (auto& v : row) v = field.sub(0, v);
    stacked.append_row(row);
  }
  FieldMatrix ker = left_kernel(stacked, field);
  FieldMatrix xs(ker.rows(), a.rows());
  for (std::size_t r = 0; r < ker.rows(); ++r)
    for (std::size_t c = 0; c < a.rows(); ++c) xs(r, c) = ker(r, c);
  FieldMatrix vecs = multiply(xs, a, field);
  const auto pivots = rref(vecs, field);
  std::vector<std::size_t> keep(pivots.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  return vecs.select_rows(keep);
}

std::vector<std::size_t> extend_basis(const FieldMatrix& base, const FieldMatrix& candidates,
                                      const FieldSpec& field) {
  FieldMatrix work = base;
  if (work.rows() == 0) work = FieldMatrix(0, candidates.cols());
  std::size_t current = rank(work, field);
  std::vector<std::size_t> chosen;
  for (std::size_t r = 0; r < candidates.rows(); ++r) {
    FieldMatrix trial = work;
    trial.append_row(candidates.row(r));
    const std::size_t rk = rank(trial, field);
    if (rk > current) {
      work = std::move(trial);
      current = rk;
      chosen.push_back(r);
    }
  }
  return chosen;
}

IntMatrix to_primitive_integer_rows(const FieldMatrix& m) {
  IntMatrix out(0, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class lcm = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    std::vector<mpz_class> ints(m.cols());
    mpz_class g = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpq_class scaled = m(r, c) * lcm;
      ints[c] = scaled.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[c].get_mpz_t());
    }
    if (g == 0) continue;
    auto row = out.append_zero_row();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_class v = ints[c] / g;
      if (!v.fits_slong_p()) throw Error(ErrorCode::kOverflow, "coordinate exceeds 64 bits");
      row[c] = v.get_si();
    }
  }
  return out;
}

}  // namespace torich
