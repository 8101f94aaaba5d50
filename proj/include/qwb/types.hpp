#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qwb {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
///
/// `alg` governs span-closure decisions, `rank` is applied to the spectrum of
/// Gram matrices (relative to the largest eigenvalue), `num` is the default
/// identity-verification tolerance and `min` the stopping threshold of the
/// index minimizer.
struct Tolerances {
  double alg = 1e-9;
  double rank = 1e-9;
  double num = 1e-8;
  double min = 1e-10;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (negative spectrum,
/// non-unitary matrix, subalgebra that is not contained in the ambient, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An internal cross-check between two independent computations failed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis (scalar index, connectedness) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwb
