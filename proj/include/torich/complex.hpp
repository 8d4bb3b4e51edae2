#pragma once

// Finite complexes whose terms are direct sums of blocks, each block a
// subspace of an exterior power given by generator rows. Differentials are
// signed sums of "include" or "wedge with m" arrows between blocks; arrows into
// zero blocks are dropped (the kill rule).

#include <bit>
#include <cstdint>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "torich/fan.hpp"
#include "torich/field.hpp"
#include "torich/forms.hpp"
#include "torich/linalg.hpp"

namespace torich {

struct ChainComplexOverField {
  FieldSpec field = FieldSpec::rationals();
  std::vector<std::size_t> dims;           // dim C^p
  std::vector<FieldMatrix> differentials;  // d_p: rows index C^p, columns C^{p+1}
  std::vector<std::size_t> cohomology() const;
  bool squares_to_zero() const;
  Int euler_characteristic() const;
};

class BlockComplex {
 public:
  struct Block {
    std::size_t degree = 0;
    IntMatrix basis;  // independent rows in the block's ambient space
    std::size_t dim() const { return basis.rows(); }
    std::size_t width() const { return basis.cols(); }
  };
  struct Arrow {
    std::size_t from = 0;
    std::size_t to = 0;
    Int sign = 1;
    int transform = -1;  // index into transforms(), -1 = identity of the ambient
  };

  explicit BlockComplex(FieldSpec field) : field_(field) {}

  std::size_t add_block(std::size_t degree, IntMatrix basis);
  int add_transform(IntMatrix t);
  void add_arrow(std::size_t from, std::size_t to, Int sign, int transform = -1);

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  std::size_t top_degree() const noexcept { return top_degree_; }

  std::vector<std::size_t> dims() const;
  /// Nonzero blocks of a degree, in insertion order.
  std::vector<std::size_t> blocks_in_degree(std::size_t degree) const;
  /// Column offset of each nonzero block inside the ambient of its degree.
  std::vector<std::size_t> ambient_offsets(std::size_t degree, std::size_t* total = nullptr) const;

  /// Images of the basis rows of degree p in ambient coordinates of degree p+1.
  IntMatrix differential(std::size_t p) const;
  /// The same differential applied to every ambient coordinate vector of degree p.
  IntMatrix ambient_differential(std::size_t p) const;
  /// Block-diagonal basis of degree p (rows = basis of C^p, columns = ambient).
  IntMatrix basis_matrix(std::size_t p) const;

  /// Checks d_{p+1} ∘ d_p = 0 in the field for every p.
  bool squares_to_zero() const;
  /// h^p = dim C^p - rank d_p - rank d_{p-1}.
  std::vector<std::size_t> cohomology(bool certify = true) const;
  ChainComplexOverField to_chain_complex() const;

 private:
  IntMatrix apply(std::size_t p, const IntMatrix& rows, const std::vector<std::size_t>& row_block) const;

  FieldSpec field_;
  std::vector<Block> blocks_;
  std::vector<Arrow> arrows_;
  std::vector<IntMatrix> transforms_;
  std::size_t top_degree_ = 0;
};

/// Ordered charts (cone ids) covering X or Y.
struct CechCover {
  std::vector<std::size_t> charts;
};

/// Maximal cones; for specs supported on a proper polyhedron, the maximal
/// cones that belong to Phi.
CechCover default_cover(const SheafSpec& spec);

/// Intersection cones of every nonempty subset of a cover.
class CechNerve {
 public:
  CechNerve(const Fan& fan, CechCover cover);

  const CechCover& cover() const noexcept { return cover_; }
  std::size_t size() const noexcept { return cover_.charts.size(); }
  /// Subsets with p+1 elements, ordered lexicographically as index tuples.
  const std::vector<std::uint32_t>& simplices(std::size_t p) const { return simplices_[p]; }
  std::size_t cone_of(std::uint32_t subset) const { return cone_[subset]; }

 private:
  CechCover cover_;
  std::vector<std::size_t> cone_;
  std::vector<std::vector<std::uint32_t>> simplices_;
};

/// (-1)^k where k is the position of j inside the subset s ∪ {j}.
inline Int cech_sign(std::uint32_t with_j, std::size_t j) {
  return (std::popcount(with_j & ((std::uint32_t{1} << j) - 1)) & 1) ? -1 : 1;
}

/// Weight-m components of the model on the cones of the nerve, indexed by
/// cone id; cones outside the nerve get an empty matrix.
std::vector<IntMatrix> nerve_components(const SheafModel& model, const CechNerve& nerve, const MVector& m);

/// Weight-m Čech complex of a sheaf model. Blocks are added simplex by simplex
/// (degree by degree, lexicographic), one per simplex, zero blocks included.
BlockComplex cech_blocks(const SheafModel& model, const CechNerve& nerve, const MVector& m);
/// Same, from precomputed nerve_components.
BlockComplex cech_blocks(const FieldSpec& field, const CechNerve& nerve, const std::vector<IntMatrix>& components);

/// Cohomology of Čech complexes keyed by their component bases. The arrows of
/// a Čech complex are fixed by the nerve, so equal keys give equal complexes.
/// Thread safe; stops growing at `capacity` entries.
class CechMemo {
 public:
  explicit CechMemo(std::size_t capacity = std::size_t{1} << 16) : capacity_(capacity) {}
  /// Bytes of the row counts and entries of the components on the nerve cones.
  static std::string key(const CechNerve& nerve, const std::vector<IntMatrix>& components);
  std::optional<std::vector<std::size_t>> find(const std::string& key) const;
  void insert(const std::string& key, const std::vector<std::size_t>& h);
  std::size_t size() const;

 private:
  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::vector<std::size_t>> map_;
};

/// h^p of the Čech complex of the given components, certified (d² = 0) on first sight.
std::vector<std::size_t> cech_cohomology(const FieldSpec& field, const CechNerve& nerve,
                                         const std::vector<IntMatrix>& components, CechMemo* memo = nullptr);

/// Weight-m total complex of the Čech–de Rham double complex of the models
/// (models[a] in form degree a), with D = δ + (-1)^p d. Blocks are ordered by
/// (a, simplex), so block index = a * (#simplices) + simplex index.
BlockComplex total_blocks(const std::vector<SheafModel>& models, const CechNerve& nerve, const MVector& m);

/// Public form of the Čech complex in coordinates.
ChainComplexOverField cech_complex(const SheafSpec& spec, const CechCover& cover, const MVector& m,
                                   const FieldSpec& field);

}  // namespace torich
