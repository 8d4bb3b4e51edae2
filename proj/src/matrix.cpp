#include "torich/matrix.hpp"

#include <algorithm>
#include <cassert>

#include "torich/error.hpp"

namespace torich {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void IntMatrix::append_row(std::span<const Int> values) {
  assert(values.size() == cols_);
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

std::span<Int> IntMatrix::append_zero_row() {
  data_.resize(data_.size() + cols_, 0);
  ++rows_;
  return row(rows_ - 1);
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  assert(cols_ == rhs.rows_);
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int a = (*this)(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c)
        out(r, c) = checked_add(out(r, c), checked_mul(a, rhs(k, c)));
    }
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Int v) { return v == 0; });
}

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::kOverflow, "integer addition overflow");
  return r;
}

Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorCode::kOverflow, "integer subtraction overflow");
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::kOverflow, "integer multiplication overflow");
  return r;
}

}  // namespace torich
