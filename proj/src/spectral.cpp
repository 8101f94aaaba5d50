#include "qwb/spectral.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qwb {

double eta_scalar(double t) {
  if (t < 0.0) throw DomainError("eta: negative argument");
  if (t == 0.0) return 0.0;
  return -t * std::log(t);
}

Mat eta_operator(const Mat& x, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x));
  RVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double t = ev(i);
    if (t < -tol) throw DomainError("eta: operator has a negative eigenvalue");
    if (std::abs(t) <= tol) t = 0.0;
    if (std::abs(t - 1.0) <= tol) t = 1.0;
    ev(i) = eta_scalar(t);
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double entropy(const Mat& x, const TraceState& tr, double tol) {
  return entropy_of_positive(x.adjoint() * x, tr, tol);
}

double entropy_of_positive(const Mat& h, const TraceState& tr, double tol) {
  return tr(eta_operator(h, tol)).real();
}

}  // namespace qwb
