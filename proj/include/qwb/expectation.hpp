#pragma once

#include <optional>
#include <vector>

#include "qwb/algebra.hpp"
#include "qwb/trace.hpp"

namespace qwb {

/// Trace-preserving conditional expectation from `source` onto `target`,
/// realized as the orthogonal projection for <x, y> = tr(x^* y).
class Expectation {
 public:
  Expectation() = default;
  Expectation(TraceState trace, AlgebraPtr target);

  const Algebra& source() const { return trace_.algebra(); }
  const Algebra& target() const { return *target_; }
  const AlgebraPtr& target_ptr() const { return target_; }
  const TraceState& trace() const { return trace_; }

  Mat operator()(const Mat& x) const;
  /// Matrix of the map in the Hilbert-Schmidt basis coordinates of the source.
  Mat map_matrix() const;

  double idempotency_defect() const;
  /// Largest |E(b1 x b2) - b1 E(x) b2| over random samples.
  double bimodule_defect(Rng& rng, int samples = 4) const;
  double trace_defect() const;

 private:
  TraceState trace_;
  AlgebraPtr target_;
  Mat units_;     // flattened tr-orthonormal basis of the target
  Mat weighted_;  // flattened u_j * density
};

/// The unique tr-preserving conditional expectation from `tr.algebra()` onto
/// `sub`. Throws InconsistencyError if the bimodule property fails.
Expectation trace_expectation(const TraceState& tr, AlgebraPtr sub,
                              const Tolerances& tol = {});

struct QuasiBasis {
  std::vector<Mat> elements;
  Mat index_element;  // sum_i l_i l_i^*

  /// max_k |sum_i l_i E(l_i^* x_k) - x_k| over the source basis.
  double reconstruction_defect(const Expectation& e) const;
};

/// Quasi-basis by target-valued Gram-Schmidt over a linear basis of the
/// source. With `shuffle_seed` the linear basis is first rotated by a
/// seeded random unitary, giving an independent quasi-basis.
QuasiBasis quasi_basis(const Expectation& e, const Tolerances& tol = {},
                       std::optional<std::uint64_t> shuffle_seed = std::nullopt);

struct IndexData {
  Mat watatani_index;
  std::optional<double> scalar_index;
  double delta = 0.0;  // sqrt of the scalar index, 0 when non-scalar

  bool is_scalar() const { return scalar_index.has_value(); }
  /// Values of the (central) index element on each block of `alg`.
  std::vector<double> block_values(const Algebra& alg) const;
};

IndexData watatani_index(const QuasiBasis& qb, const Tolerances& tol = {});
IndexData watatani_index(const Expectation& e, const Tolerances& tol = {});

struct MinimalExpectation {
  Expectation expectation;
  IndexData index;
  TraceState trace;             // trace on the larger algebra making E trace-preserving
  std::vector<double> trajectory;  // ||Ind_w|| at each iterate
  int iterations = 0;
  bool stagnated = false;
};

/// Minimal conditional expectation from `a` onto `b`.
///
/// Expectations are parametrized by trace weights on the blocks of `a`; the
/// weights are updated multiplicatively by the block values of the Watatani
/// index (power iteration towards the Perron-Frobenius vector of the
/// inclusion), renormalized on every connected component of the inclusion.
/// Throws HypothesisError when the components end at different index values.
MinimalExpectation minimal_expectation(AlgebraPtr b, AlgebraPtr a,
                                       const std::optional<TraceState>& tr_hint = std::nullopt,
                                       const Tolerances& tol = {}, int max_iterations = 10000);

/// Minimal central projections of Z(A) intersected with Z(B).
std::vector<Mat> inclusion_components(const Algebra& b, const Algebra& a,
                                      const Tolerances& tol = {});

/// (1 / index) * sum_i l_i x l_i^*, with the quasi-basis already represented
/// on the same space as x.
Mat expectation_onto_relative_commutant(const Mat& x, const std::vector<Mat>& quasi,
                                        double scalar_index);

}  // namespace qwb
