#pragma once

// Exact linear algebra over Q and F_p.
//
// Two layers: a fast rank kernel on integer matrices (used per weight in the
// Cech engines) and a general dense matrix over FieldSpec scalars for kernels,
// coordinates and intersections.

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "torich/field.hpp"
#include "torich/matrix.hpp"

namespace torich {

/// Rank of an integer matrix read over `field`. Over Q this is fraction-free
/// (Bareiss) elimination in 128-bit checked arithmetic, restarting in GMP
/// integers on overflow; over F_p plain elimination on residues. Pivots are
/// chosen as the first nonzero entry in row-major order.
std::size_t rank(const IntMatrix& m, const FieldSpec& field);

/// Same contract, unconditionally in GMP integers. Kept as the reference path.
std::size_t rank_bigint(const IntMatrix& m);

/// Determinant of a square integer matrix (GMP, Bareiss).
mpz_class determinant(const IntMatrix& m);

/// Dense matrix of field scalars, row-major.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static FieldMatrix from_int(const IntMatrix& m, const FieldSpec& field);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  mpq_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpq_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<mpq_class>& values);
  void append_rows(const FieldMatrix& other);
  std::vector<mpq_class> row(std::size_t r) const;
  FieldMatrix select_rows(const std::vector<std::size_t>& indices) const;

  bool is_zero() const;
  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b, const FieldSpec& field);

/// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(FieldMatrix& m, const FieldSpec& field);

std::size_t rank(const FieldMatrix& m, const FieldSpec& field);

/// Basis (as rows) of {x : x * a = 0}.
FieldMatrix left_kernel(const FieldMatrix& a, const FieldSpec& field);

/// Coefficients c with c * basis = targets, where basis has independent rows.
/// Empty optional if some target row is outside the row space.
std::optional<FieldMatrix> row_coordinates(const FieldMatrix& basis, const FieldMatrix& targets,
                                           const FieldSpec& field);

/// Row basis of rowspace(a) ∩ rowspace(b).
FieldMatrix intersect_row_spaces(const FieldMatrix& a, const FieldMatrix& b, const FieldSpec& field);

/// Indices of rows of `candidates` that, taken greedily in order, extend the
/// row space of `base` to rowspace(base) + rowspace(candidates).
std::vector<std::size_t> extend_basis(const FieldMatrix& base, const FieldMatrix& candidates,
                                      const FieldSpec& field);

/// Row basis of a rational matrix scaled to primitive integer rows (Q only).
IntMatrix to_primitive_integer_rows(const FieldMatrix& m);

}  // namespace torich
