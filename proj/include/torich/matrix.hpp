#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace torich {

using Int = std::int64_t;

/// Dense row-major integer matrix. Rows are the primary unit: subspaces and
/// lattices are always stored as generator rows.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Int> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Int> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Int> values);
  /// Appends a zero row and returns a view of it.
  std::span<Int> append_zero_row();
  void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

  IntMatrix transposed() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  bool is_zero() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  const std::vector<Int>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Overflow-checked int64 arithmetic; throws Error(kOverflow).
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);

}  // namespace torich
