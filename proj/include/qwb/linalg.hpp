#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qwb/types.hpp"

namespace qwb {

// Column-major flattening: vec(x)[i + n*j] = x(i, j).
Vec flatten(const Mat& x);
Mat unflatten(const Eigen::Ref<const Vec>& v, int n);
Mat stack_columns(const std::vector<Mat>& elements);

/// Spectral norm.
double op_norm(const Mat& x);
double max_abs(const Mat& x);
Mat adjoint(const Mat& x);
Mat hermitian_part(const Mat& x);
Mat identity(int n);

/// Orthonormal basis of the span of the columns, dropping directions whose
/// residual falls below `tol` times the column norm.
Mat orthonormalize_columns(const Mat& columns, double tol);

/// Eigenvectors of a Hermitian positive semidefinite matrix whose eigenvalues
/// are below `rel_tol` times the largest one, or times `scale` when that is
/// larger (so that a numerically zero Gram matrix is recognized as such).
Mat psd_null_space(const Mat& gram, double rel_tol, double scale = 0.0);

/// Orthonormal basis of the intersection of two column spans (both inputs
/// must have orthonormal columns). Principal angles with cosine within `tol`
/// of one are kept.
Mat span_intersection(const Mat& q1, const Mat& q2, double tol);

/// Applies `f` to the spectrum of a Hermitian matrix.
Mat hermitian_function(const Mat& h, const std::function<double(double)>& f);

/// Projection onto the eigenspaces of a Hermitian matrix, grouped by clusters
/// of eigenvalues separated by more than `gap`. Ordered by increasing value.
struct SpectralCluster {
  double value;
  Mat projection;
  Mat range;  // orthonormal columns spanning the eigenspace
};
std::vector<SpectralCluster> spectral_clusters(const Mat& h, double gap);

/// Deterministic pseudo-random source used by every randomized routine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  cplx complex_normal();
  Mat gaussian(int rows, int cols);
  /// Haar-distributed unitary (QR of a complex Ginibre matrix with the
  /// phases of R's diagonal absorbed).
  Mat haar_unitary(int n);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qwb
