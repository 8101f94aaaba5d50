#include "qwb/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace qwb {

Vec flatten(const Mat& x) {
  return Eigen::Map<const Vec>(x.data(), x.size());
}

Mat unflatten(const Eigen::Ref<const Vec>& v, int n) {
  Mat out(n, n);
  Eigen::Map<Vec>(out.data(), out.size()) = v;
  return out;
}

Mat stack_columns(const std::vector<Mat>& elements) {
  if (elements.empty()) return Mat();
  const auto len = elements.front().size();
  Mat out(len, static_cast<Eigen::Index>(elements.size()));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = flatten(elements[j]);
  }
  return out;
}

double op_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues()(0);
}

double max_abs(const Mat& x) {
  if (x.size() == 0) return 0.0;
  return x.cwiseAbs().maxCoeff();
}

Mat adjoint(const Mat& x) { return x.adjoint(); }

Mat hermitian_part(const Mat& x) { return 0.5 * (x + x.adjoint()); }

Mat identity(int n) { return Mat::Identity(n, n); }

Mat orthonormalize_columns(const Mat& columns, double tol) {
  const Eigen::Index rows = columns.rows();
  Mat q(rows, columns.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Vec v = columns.col(j);
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    // two passes of classical Gram-Schmidt
    for (int pass = 0; pass < 2 && kept > 0; ++pass) {
      v -= q.leftCols(kept) * (q.leftCols(kept).adjoint() * v);
    }
    const double norm1 = v.norm();
    if (norm1 <= tol * norm0) continue;
    q.col(kept++) = v / norm1;
  }
  return q.leftCols(kept);
}

Mat psd_null_space(const Mat& gram, double rel_tol, double scale) {
  const Eigen::Index n = gram.rows();
  if (n == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram));
  const RVec& ev = es.eigenvalues();
  const double top = std::max({ev(n - 1), scale, 0.0});
  Eigen::Index count = 0;
  while (count < n && ev(count) <= rel_tol * top) ++count;
  if (top == 0.0) count = n;
  return es.eigenvectors().leftCols(count);
}

Mat span_intersection(const Mat& q1, const Mat& q2, double tol) {
  if (q1.cols() == 0 || q2.cols() == 0) return Mat(q1.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(q1.adjoint() * q2, Eigen::ComputeFullU);
  const RVec& s = svd.singularValues();
  Eigen::Index count = 0;
  while (count < s.size() && s(count) >= 1.0 - tol) ++count;
  Mat out = q1 * svd.matrixU().leftCols(count);
  return orthonormalize_columns(out, 1e-6);
}

Mat hermitian_function(const Mat& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  RVec mapped = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * mapped.cast<cplx>().asDiagonal() *
         es.eigenvectors().adjoint();
}

std::vector<SpectralCluster> spectral_clusters(const Mat& h, double gap) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  const RVec& ev = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  std::vector<SpectralCluster> out;
  Eigen::Index start = 0;
  const Eigen::Index n = ev.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || ev(i) - ev(i - 1) > gap) {
      SpectralCluster c;
      c.range = vecs.middleCols(start, i - start);
      c.projection = c.range * c.range.adjoint();
      c.value = ev.segment(start, i - start).mean();
      out.push_back(std::move(c));
      start = i;
    }
  }
  return out;
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Mat Rng::gaussian(int rows, int cols) {
  Mat out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) out(i, j) = complex_normal();
  }
  return out;
}

Mat Rng::haar_unitary(int n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace qwb
