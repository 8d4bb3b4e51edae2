#pragma once

// The dual pair N, M = Hom(N, Z) of rank n, perpendicular sublattices,
// adapted bases of smooth cones, and exterior-power coordinates.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "torich/field.hpp"
#include "torich/matrix.hpp"

namespace torich {

template <class Tag>
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t rank) : coords_(rank, 0) {}
  explicit LatticeVector(std::vector<Int> coords) : coords_(std::move(coords)) {}
  LatticeVector(std::initializer_list<Int> coords) : coords_(coords) {}

  std::size_t rank() const noexcept { return coords_.size(); }
  Int operator[](std::size_t i) const { return coords_[i]; }
  Int& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Int> coords() const noexcept { return coords_; }
  const std::vector<Int>& vec() const noexcept { return coords_; }

  bool is_zero() const {
    for (Int c : coords_)
      if (c != 0) return false;
    return true;
  }

  LatticeVector operator+(const LatticeVector& o) const {
    LatticeVector r(*this);
    for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] = checked_add(r.coords_[i], o.coords_[i]);
    return r;
  }
  LatticeVector operator-(const LatticeVector& o) const {
    LatticeVector r(*this);
    for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] = checked_sub(r.coords_[i], o.coords_[i]);
    return r;
  }
  LatticeVector operator-() const {
    LatticeVector r(*this);
    for (auto& c : r.coords_) c = checked_sub(0, c);
    return r;
  }
  LatticeVector scaled(Int k) const {
    LatticeVector r(*this);
    for (auto& c : r.coords_) c = checked_mul(c, k);
    return r;
  }

  friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

 private:
  std::vector<Int> coords_;
};

struct NTag {};
struct MTag {};
using NVector = LatticeVector<NTag>;
using MVector = LatticeVector<MTag>;

std::string to_string(std::span<const Int> coords);
template <class Tag>
std::string to_string(const LatticeVector<Tag>& v) {
  return to_string(v.coords());
}

/// N = Z^n with dual M = Z^n under the standard pairing.
struct LatticeContext {
  std::size_t rank = 0;
};

/// <v, m>. Throws Error(kRankMismatch).
Int pairing(const NVector& v, const MVector& m);

/// Divides by the gcd of the coordinates; zero stays zero.
template <class Tag>
LatticeVector<Tag> primitive(const LatticeVector<Tag>& v);
Int gcd_of(std::span<const Int> coords);

/// Row-style Hermite normal form: echelon rows, positive pivots, entries above
/// each pivot reduced into [0, pivot). Zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& rows);

/// A sublattice of M in canonical (Hermite) form, so equality is syntactic.
class Sublattice {
 public:
  Sublattice(std::size_t ambient_rank, const IntMatrix& generators);

  std::size_t ambient_rank() const noexcept { return ambient_rank_; }
  std::size_t rank() const noexcept { return basis_.rows(); }
  const IntMatrix& basis() const noexcept { return basis_; }
  std::vector<MVector> generators() const;

  bool contains(const MVector& m) const;
  bool contains(const Sublattice& other) const;
  /// M / L torsion-free, i.e. gcd of maximal minors of the basis is 1.
  bool is_saturated() const;

  friend bool operator==(const Sublattice&, const Sublattice&) = default;

 private:
  std::size_t ambient_rank_;
  IntMatrix basis_;
};

/// {m in M : <v, m> = 0 for all v in rays}.
Sublattice perp_sublattice(std::size_t rank, std::span<const NVector> rays);

struct AdaptedBasis {
  std::vector<NVector> n_basis;  // first entries are the given rays
  std::vector<MVector> m_basis;  // dual: <n_basis[i], m_basis[j]> = delta_ij
};

/// Completes the rays of a smooth cone to a Z-basis of N. Throws
/// Error(kNotSmooth) when they are not part of a basis.
AdaptedBasis adapted_basis(std::size_t rank, std::span<const NVector> cone_rays);

/// gcd of the k x k minors of a k x n integer matrix (0 if rank < k).
mpz_class gcd_of_maximal_minors(const IntMatrix& rows);

// --- exterior powers -------------------------------------------------------

/// Index sets S of {0..n-1} with |S| = a, lexicographic; bit i set = i in S.
const std::vector<unsigned>& wedge_subsets(std::size_t n, std::size_t a);
std::size_t wedge_dimension(std::size_t n, std::size_t a);
/// Position of the subset bitmask in wedge_subsets(n, popcount(mask)).
std::size_t wedge_index(std::size_t n, unsigned mask);

/// Coordinates of v_1 ^ ... ^ v_a in the basis e_S (Plücker coordinates).
std::vector<Int> wedge_coordinates(std::span<const MVector> vectors, std::size_t rank);
std::vector<Int> wedge_coordinates(std::span<const MVector> vectors, std::size_t rank, const FieldSpec& field);

/// m ^ omega for omega in Lambda^a, result in Lambda^{a+1} (integer coords).
std::vector<Int> wedge_with(const MVector& m, std::span<const Int> omega, std::size_t rank, std::size_t a);

/// Generators of Lambda^a(L) for a sublattice L given by basis rows.
IntMatrix exterior_power_rows(const IntMatrix& basis, std::size_t rank, std::size_t a);

}  // namespace torich
