#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

#include "torich/matrix.hpp"

namespace torich {

/// Coefficient field: the rationals or a prime field F_p.
class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(0); }
  /// Throws Error(kField) unless p is prime.
  static FieldSpec prime(Int p);
  /// Accepts "Q", "QQ", "F2", "F3", "Fp:5", "GF(7)".
  static FieldSpec parse(std::string_view text);

  bool is_rational() const noexcept { return p_ == 0; }
  Int characteristic() const noexcept { return p_; }
  std::string name() const;

  /// Residue in [0, p) for prime fields; identity over Q.
  Int reduce(Int v) const noexcept {
    if (p_ == 0) return v;
    const Int r = v % p_;
    return r < 0 ? r + p_ : r;
  }

  // Scalar arithmetic on mpq_class values. Prime-field elements are kept as
  // integer residues in [0, p).
  mpq_class from_int(Int v) const { return mpq_class(static_cast<long>(reduce(v))); }
  mpq_class normalize(const mpq_class& x) const;
  mpq_class add(const mpq_class& a, const mpq_class& b) const { return normalize(a + b); }
  mpq_class sub(const mpq_class& a, const mpq_class& b) const { return normalize(a - b); }
  mpq_class mul(const mpq_class& a, const mpq_class& b) const { return normalize(a * b); }
  mpq_class inv(const mpq_class& a) const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  explicit FieldSpec(Int p) : p_(p) {}
  Int p_;
};

bool is_prime(Int p);

}  // namespace torich
