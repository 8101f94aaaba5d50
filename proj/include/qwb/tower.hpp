#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qwb/algebra.hpp"
#include "qwb/expectation.hpp"
#include "qwb/trace.hpp"

namespace qwb {

/// The GNS space L^2(A, tr) with the left regular representation.
///
/// Coordinates are a tr-orthonormal basis of A whose leading vectors span a
/// chosen subalgebra, so the Jones projection onto that subalgebra is a
/// coordinate projection.
class GnsSpace {
 public:
  GnsSpace(const TraceState& tr, const Algebra& leading, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(basis_.cols()); }
  int leading_dim() const { return leading_; }
  const TraceState& trace() const { return trace_; }

  /// Left multiplication by x in L^2 coordinates.
  Mat embed(const Mat& x) const;
  /// Right multiplication by x in L^2 coordinates.
  Mat right_action(const Mat& x) const;
  /// Inverse of `embed` on its image: x = X(1) read back as an element of A.
  Mat pullback(const Mat& image) const;
  Vec coordinates(const Mat& x) const;
  Mat basis_vector(int i) const;

  /// Orthogonal projection of L^2(A) onto L^2(sub).
  Mat projection_onto(const Algebra& sub) const;
  /// Exact coordinate projection onto the leading subalgebra.
  Mat leading_projection() const;

  Algebra embed_algebra(const Algebra& alg) const;
  Algebra right_algebra(const Algebra& alg) const;

 private:
  TraceState trace_;
  Mat basis_;     // flattened tr-orthonormal basis of A
  Mat weighted_;  // flattened v_i * density
  Vec unit_;      // coordinates of 1
  int n_ = 0;
  int leading_ = 0;
};

/// Result of one basic construction step sub ⊂ alg  ->  alg ⊂ alg_1.
struct BasicConstruction {
  std::shared_ptr<const GnsSpace> gns;
  Mat jones;
  AlgebraPtr upper;       // alg_1, built as the commutant of the right sub-action
  AlgebraPtr sub_image;   // sub on L^2(alg)
  AlgebraPtr alg_image;   // alg on L^2(alg)
  TraceState upper_trace;
  Expectation down;       // tr_1-preserving alg_1 -> alg
  double delta2 = 0.0;
  double generated_defect = 0.0;  // distance between the two constructions of alg_1,
                                  // NaN when the space is too large to cross-check
  double trace_system_residual = 0.0;
};

/// Basic construction of the inclusion target(E) ⊂ source(E) for a
/// trace-preserving E with scalar Watatani index.
BasicConstruction basic_construction(const Expectation& e, const Tolerances& tol = {});

struct TowerLevel {
  int level = 0;
  int ambient_dim = 0;
  AlgebraPtr algebra;               // A_k
  std::vector<AlgebraPtr> images;   // B, A, ..., A_{k-1} on this level's space
  std::vector<Mat> jones;           // e_1, ..., e_k on this level's space
  TraceState trace;                 // tr_k
  Expectation expectation_down;     // E^{A_k}_{A_{k-1}}
  std::shared_ptr<const GnsSpace> gns;  // L^2(A_{k-1}) carrying this level (k >= 1)
  double generated_defect = 0.0;
  double trace_system_residual = 0.0;
};

struct BaseInclusion {
  AlgebraPtr b;
  AlgebraPtr a;
  TraceState trace;
  Expectation expectation;
  QuasiBasis quasi;
  IndexData index;
};

class Tower {
 public:
  Tower(BaseInclusion base, TowerLevel level0)
      : base_(std::move(base)) {
    levels_.push_back(std::move(level0));
  }

  const BaseInclusion& base() const { return base_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const TowerLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  double delta() const { return base_.index.delta; }
  double index() const { return *base_.index.scalar_index; }

  /// Carries an operator from level `from` to level `to` >= from.
  Mat lift(const Mat& x, int from, int to) const;
  /// Pulls an operator in the image of A_{to} back down to level `to`.
  Mat pull(const Mat& x, int from, int to) const;
  Algebra lift_algebra(const Algebra& alg, int from, int to) const;

  void push_level(TowerLevel level) { levels_.push_back(std::move(level)); }

 private:
  BaseInclusion base_;
  std::vector<TowerLevel> levels_;
};

/// Level-0 tower for B ⊂ A with the tr-preserving expectation.
Tower make_tower(AlgebraPtr b, AlgebraPtr a, const TraceState& tr, const Tolerances& tol = {});
/// Adds the next level by the basic construction of A_{k-1} ⊂ A_k.
Tower extend_tower(Tower t, const Tolerances& tol = {});
Tower build_tower(AlgebraPtr b, AlgebraPtr a, const TraceState& tr, int depth,
                  const Tolerances& tol = {});

struct IntermediateConstruction {
  Mat jones;          // e_C on L^2(A)
  AlgebraPtr dual;    // C_1 on L^2(A)
  double generated_defect = 0.0;
};

/// e_C and C_1 for an intermediate B ⊆ C ⊆ A (level 1 of the tower).
IntermediateConstruction intermediate_basic_construction(const Tower& t, const Algebra& c,
                                                         const Tolerances& tol = {});

/// X'∩A_k for a subalgebra X of A_{k-1} on the level-k space. For k >= 1,
/// A_k is the commutant of the right action of A_{k-2} (B when k = 1), so
/// this is the commutant in the full matrix algebra of the algebra spanned
/// by the commuting products x r.
Algebra relative_commutant(const Tower& t, int level, const Algebra& x,
                           const Tolerances& tol = {});

/// Largest distance between the spans of two algebras (0 when equal).
double span_distance(const Algebra& x, const Algebra& y);

}  // namespace qwb
