#pragma once

#include <vector>

#include "qwb/algebra.hpp"

namespace qwb {

/// Faithful tracial state on a multi-matrix algebra.
///
/// weights[b] is the trace of a minimal projection of block b, so that
/// tr(1) = sum_b weights[b] * size_b = 1. The state is realized on the
/// ambient space as tr(x) = Tr(density * x) with a density that is a positive
/// combination of the central projections.
class TraceState {
 public:
  TraceState() = default;
  TraceState(AlgebraPtr algebra, std::vector<double> weights);

  /// The trace restricted from the normalized ambient trace Tr / n.
  static TraceState normalized_ambient(AlgebraPtr algebra);

  const Algebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const std::vector<double>& weights() const { return weights_; }
  const Mat& density() const { return density_; }

  cplx operator()(const Mat& x) const;
  /// Largest |tr(xy) - tr(yx)| over basis pairs.
  double tracial_defect() const;

 private:
  AlgebraPtr algebra_;
  std::vector<double> weights_;
  Mat density_;
};

/// Restriction of a trace to a subalgebra, re-expressed in the subalgebra's
/// own block weights.
TraceState restrict_trace(const TraceState& tr, AlgebraPtr sub);

/// <x, y> = tr(x^* y).
cplx l2_inner(const TraceState& tr, const Mat& x, const Mat& y);
/// ||x||_2 = sqrt(tr(x^* x)).
double l2_norm(const TraceState& tr, const Mat& x);

/// Smallest trace of a projection of the algebra.
double min_projection_trace(const TraceState& tr);

}  // namespace qwb
