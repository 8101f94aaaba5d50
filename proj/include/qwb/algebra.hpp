#pragma once

#include <memory>
#include <vector>

#include "qwb/linalg.hpp"
#include "qwb/types.hpp"

namespace qwb {

/// One full matrix block M_size of a multi-matrix algebra, represented
/// `multiplicity` times on the ambient space.
struct Block {
  int multiplicity = 0;
  int size = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

/// A unital *-subalgebra of M_n.
///
/// The linear span is stored as a Hilbert-Schmidt orthonormal basis (as the
/// columns of an n^2 x dim matrix, column-major flattening). The centre is
/// split into minimal central projections on construction; these are ordered
/// by descending ambient rank and then by the position of their first
/// non-zero entry.
class Algebra {
 public:
  Algebra() = default;

  /// Builds the algebra from a spanning family of a *-closed subalgebra.
  /// `generators` should generate the algebra as a *-algebra; when empty a
  /// generic generating family is drawn from the span.
  static Algebra from_span(int ambient_dim, const Mat& spanning_columns,
                           std::vector<Mat> generators = {},
                           const Tolerances& tol = {});
  static Algebra from_span(int ambient_dim, const std::vector<Mat>& spanning,
                           std::vector<Mat> generators = {},
                           const Tolerances& tol = {});
  /// The full matrix algebra M_n.
  static Algebra full(int n);
  /// C*1 inside M_n.
  static Algebra scalars(int n);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis_matrix() const { return basis_; }
  Mat basis_element(int i) const { return unflatten(basis_.col(i), n_); }
  std::vector<Mat> basis() const;
  const std::vector<Mat>& generators() const { return generators_; }
  const std::vector<Mat>& central_projections() const { return central_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_full() const { return dim() == n_ * n_; }
  bool is_factor() const { return blocks_.size() == 1; }

  /// Hilbert-Schmidt orthogonal projection onto the span.
  Mat project(const Mat& x) const;
  /// Frobenius distance from x to the span.
  double residual(const Mat& x) const;
  bool contains(const Mat& x, double tol) const;
  bool contains(const Algebra& other, double tol) const;
  Mat random_element(Rng& rng) const;
  Mat random_hermitian(Rng& rng) const;

  /// Largest defect of closure under multiplication and adjoint on basis pairs.
  double closure_defect() const;

 private:
  friend Algebra commutant_in_full(const Algebra& sub, const Tolerances& tol);
  void pick_generators(std::vector<Mat> generators);

  int n_ = 0;
  Mat basis_;
  std::vector<Mat> generators_;
  std::vector<Mat> central_;
  std::vector<Block> blocks_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Smallest unital *-subalgebra of M_n containing the generators, obtained
/// by saturating the span of words under left multiplication.
Algebra algebra_from_generators(int ambient_dim, const std::vector<Mat>& generators,
                                const Tolerances& tol = {});

/// Relative commutant {x in ambient : xs = sx for all s in sub}.
Algebra commutant(const Algebra& sub, const Algebra& ambient,
                  const Tolerances& tol = {});

/// Commutant of a unital subalgebra inside the full matrix algebra M_n,
/// assembled from matrix units (no n^2-dimensional linear system).
Algebra commutant_in_full(const Algebra& sub, const Tolerances& tol = {});

/// Algebra of the span intersection of two subalgebras of the same M_n.
Algebra intersection(const Algebra& a, const Algebra& b, const Tolerances& tol = {});

/// A system of matrix units for one block: column[i] = f_{i0}, with
/// f_{00} = range * range^*.
struct BlockUnits {
  std::vector<Mat> column;
  Mat range;
};
std::vector<BlockUnits> matrix_units(const Algebra& alg, std::uint64_t seed = 17);

/// Image of an algebra under a *-homomorphism given on matrices.
template <typename F>
Algebra map_algebra(const Algebra& alg, int target_dim, F&& hom,
                    const Tolerances& tol = {}) {
  std::vector<Mat> images;
  images.reserve(static_cast<std::size_t>(alg.dim()));
  for (int i = 0; i < alg.dim(); ++i) images.push_back(hom(alg.basis_element(i)));
  std::vector<Mat> gens;
  for (const Mat& g : alg.generators()) gens.push_back(hom(g));
  return Algebra::from_span(target_dim, images, std::move(gens), tol);
}

}  // namespace qwb
