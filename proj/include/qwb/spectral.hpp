#pragma once

#include "qwb/trace.hpp"

namespace qwb {

/// eta(t) = -t ln t with eta(0) = 0. Defined on [0, inf); negative for t > 1.
double eta_scalar(double t);

/// Spectral calculus eta(x) for a Hermitian positive semidefinite x.
///
/// Eigenvalues within `tol` of 0 or 1 are snapped to the boundary; an
/// eigenvalue below -tol is a DomainError. Eigenvalues above 1 are kept
/// (eta extends to them).
Mat eta_operator(const Mat& x, double tol = 1e-8);

/// H(|x|^2) = tr(eta(x^* x)).
double entropy(const Mat& x, const TraceState& tr, double tol = 1e-8);

/// tr(eta(h)) for a positive h given directly.
double entropy_of_positive(const Mat& h, const TraceState& tr, double tol = 1e-8);

}  // namespace qwb
