#include "qwb/expectation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qwb {

Expectation::Expectation(TraceState trace, AlgebraPtr target)
    : trace_(std::move(trace)), target_(std::move(target)) {
  const int n = trace_.algebra().ambient_dim();
  if (target_->ambient_dim() != n) throw DomainError("expectation: ambient mismatch");
  const Mat& t = target_->basis_matrix();
  const Mat& rho = trace_.density();
  // Gram matrix of the target basis for tr(x^* y)
  const Eigen::Index k = t.cols();
  Mat weighted_t(t.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    weighted_t.col(j) = flatten(unflatten(t.col(j), n) * rho);
  }
  const Mat gram = t.adjoint() * weighted_t;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("expectation: trace is not faithful on the target");
  }
  const Mat inv_sqrt = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                       es.eigenvectors().adjoint();
  units_ = t * inv_sqrt;
  weighted_ = weighted_t * inv_sqrt;
}

Mat Expectation::operator()(const Mat& x) const {
  const int n = trace_.algebra().ambient_dim();
  return unflatten(units_ * (weighted_.adjoint() * flatten(x)), n);
}

Mat Expectation::map_matrix() const {
  const Mat& q = source().basis_matrix();
  return q.adjoint() * units_ * (weighted_.adjoint() * q);
}

double Expectation::idempotency_defect() const {
  double worst = 0.0;
  for (int i = 0; i < source().dim(); ++i) {
    const Mat e = (*this)(source().basis_element(i));
    worst = std::max(worst, ((*this)(e) - e).norm());
  }
  return worst;
}

double Expectation::bimodule_defect(Rng& rng, int samples) const {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Mat b1 = target().random_element(rng);
    const Mat b2 = target().random_element(rng);
    const Mat x = source().random_element(rng);
    const Mat lhs = (*this)(b1 * x * b2);
    const Mat rhs = b1 * (*this)(x) * b2;
    worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  return worst;
}

double Expectation::trace_defect() const {
  double worst = 0.0;
  for (int i = 0; i < source().dim(); ++i) {
    const Mat x = source().basis_element(i);
    worst = std::max(worst, std::abs(trace_((*this)(x)) - trace_(x)));
  }
  return worst;
}

Expectation trace_expectation(const TraceState& tr, AlgebraPtr sub, const Tolerances& tol) {
  if (!tr.algebra().contains(*sub, 1e-8)) {
    throw DomainError("trace_expectation: subalgebra is not contained in the ambient");
  }
  Expectation e(tr, std::move(sub));
  Rng rng(0xe1ULL + static_cast<std::uint64_t>(e.source().dim()));
  const double defect = e.bimodule_defect(rng, 2);
  if (defect > tol.num) {
    throw InconsistencyError("trace_expectation: bimodule property fails (defect " +
                             std::to_string(defect) + ")");
  }
  return e;
}

double QuasiBasis::reconstruction_defect(const Expectation& e) const {
  double worst = 0.0;
  for (int k = 0; k < e.source().dim(); ++k) {
    const Mat x = e.source().basis_element(k);
    Mat r = Mat::Zero(x.rows(), x.cols());
    for (const Mat& l : elements) r += l * e(l.adjoint() * x);
    worst = std::max(worst, (r - x).norm());
  }
  return worst;
}

QuasiBasis quasi_basis(const Expectation& e, const Tolerances& tol,
                       std::optional<std::uint64_t> shuffle_seed) {
  const Algebra& src = e.source();
  const int n = src.ambient_dim();
  Mat linear = src.basis_matrix();
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    linear = linear * rng.haar_unitary(src.dim());
  }

  QuasiBasis qb;
  auto residual_of = [&](const Mat& x) {
    Mat y = x;
    for (int pass = 0; pass < 2; ++pass) {
      Mat r = Mat::Zero(n, n);
      for (const Mat& l : qb.elements) r += l * e(l.adjoint() * y);
      y -= r;
    }
    return y;
  };

  for (Eigen::Index k = 0; k < linear.cols(); ++k) {
    const Mat x = unflatten(linear.col(k), n);
    const Mat y = residual_of(x);
    const Mat s = hermitian_part(e(y.adjoint() * y));
    const double scale = op_norm(e(x.adjoint() * x));
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    const RVec& mu = es.eigenvalues();
    const double top = mu.maxCoeff();
    if (top <= 1e-10 * scale) continue;
    RVec inv(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      inv(i) = mu(i) > 1e-9 * top ? 1.0 / std::sqrt(mu(i)) : 0.0;
    }
    const Mat s_inv_sqrt =
        es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    qb.elements.push_back(y * s_inv_sqrt);
  }

  qb.index_element = Mat::Zero(n, n);
  for (const Mat& l : qb.elements) qb.index_element += l * l.adjoint();

  const double defect = qb.reconstruction_defect(e);
  if (defect > tol.num) {
    throw InconsistencyError("quasi_basis: reconstruction defect " + std::to_string(defect));
  }
  return qb;
}

std::vector<double> IndexData::block_values(const Algebra& alg) const {
  std::vector<double> out;
  for (const Mat& z : alg.central_projections()) {
    out.push_back((z * watatani_index).trace().real() / z.trace().real());
  }
  return out;
}

IndexData watatani_index(const QuasiBasis& qb, const Tolerances& tol) {
  IndexData d;
  d.watatani_index = hermitian_part(qb.index_element);
  const Eigen::Index n = d.watatani_index.rows();
  const double c = d.watatani_index.trace().real() / static_cast<double>(n);
  const Mat dev = d.watatani_index - c * Mat::Identity(n, n);
  if (op_norm(dev) <= tol.num * std::max(1.0, c)) {
    d.scalar_index = c;
    d.delta = std::sqrt(c);
  }
  return d;
}

IndexData watatani_index(const Expectation& e, const Tolerances& tol) {
  return watatani_index(quasi_basis(e, tol), tol);
}

std::vector<Mat> inclusion_components(const Algebra& b, const Algebra& a,
                                      const Tolerances& tol) {
  const int n = a.ambient_dim();
  auto centre_columns = [n](const Algebra& alg) {
    Mat q(static_cast<Eigen::Index>(n) * n,
          static_cast<Eigen::Index>(alg.central_projections().size()));
    for (std::size_t i = 0; i < alg.central_projections().size(); ++i) {
      const Mat& z = alg.central_projections()[i];
      q.col(static_cast<Eigen::Index>(i)) = flatten(z) / std::sqrt(z.trace().real());
    }
    return q;
  };
  const Mat common = span_intersection(centre_columns(a), centre_columns(b), tol.rank);
  if (common.cols() == 0) throw InconsistencyError("inclusion: centres share no unit");
  return Algebra::from_span(n, common, {}, tol).central_projections();
}

MinimalExpectation minimal_expectation(AlgebraPtr b, AlgebraPtr a,
                                       const std::optional<TraceState>& tr_hint,
                                       const Tolerances& tol, int max_iterations) {
  if (!a->contains(*b, 1e-8)) {
    throw DomainError("minimal_expectation: B is not contained in A");
  }
  const auto& blocks = a->blocks();
  const std::size_t nb = blocks.size();
  const auto components = inclusion_components(*b, *a, tol);

  std::vector<std::size_t> component_of(nb, 0);
  for (std::size_t p = 0; p < nb; ++p) {
    const Mat& z = a->central_projections()[p];
    for (std::size_t c = 0; c < components.size(); ++c) {
      if ((components[c] * z).trace().real() > 0.5 * z.trace().real()) component_of[p] = c;
    }
  }

  std::vector<double> t;
  if (tr_hint && tr_hint->algebra().dim() == a->dim() &&
      tr_hint->weights().size() == nb) {
    t = tr_hint->weights();
  } else {
    t = TraceState::normalized_ambient(a).weights();
  }
  std::vector<double> mass(components.size(), 0.0);
  for (std::size_t p = 0; p < nb; ++p) mass[component_of[p]] += t[p] * blocks[p].size;

  MinimalExpectation out;
  double previous = -1.0;
  for (int it = 0; it < max_iterations; ++it) {
    TraceState tr(a, t);
    Expectation e = trace_expectation(tr, b, tol);
    QuasiBasis qb = quasi_basis(e, tol);
    IndexData idx = watatani_index(qb, tol);
    const std::vector<double> values = idx.block_values(*a);
    const double top = *std::max_element(values.begin(), values.end());
    const double bottom = *std::min_element(values.begin(), values.end());
    out.trajectory.push_back(top);
    out.iterations = it + 1;

    // spread of the index inside every component
    double component_spread = 0.0;
    for (std::size_t c = 0; c < components.size(); ++c) {
      double lo = 1e300, hi = -1e300;
      for (std::size_t p = 0; p < nb; ++p) {
        if (component_of[p] != c) continue;
        lo = std::min(lo, values[p]);
        hi = std::max(hi, values[p]);
      }
      component_spread = std::max(component_spread, hi - lo);
    }
    const bool settled = component_spread <= tol.min * top &&
                         (previous < 0.0 || std::abs(top - previous) <= tol.min * top);
    if (settled || top - bottom <= tol.min * top) {
      if (top - bottom > tol.num * top) {
        throw HypothesisError(
            "minimal_expectation: connected components of the inclusion have different "
            "minimal indices; the minimal expectation is not unique");
      }
      if (!idx.is_scalar()) {
        // within tol.min of scalar but outside tol.num cannot happen; keep the guard explicit
        throw HypothesisError("minimal_expectation: index is not scalar");
      }
      out.expectation = std::move(e);
      out.index = std::move(idx);
      out.trace = std::move(tr);
      return out;
    }
    previous = top;

    for (std::size_t p = 0; p < nb; ++p) t[p] *= values[p];
    std::vector<double> now(components.size(), 0.0);
    for (std::size_t p = 0; p < nb; ++p) now[component_of[p]] += t[p] * blocks[p].size;
    for (std::size_t p = 0; p < nb; ++p) t[p] *= mass[component_of[p]] / now[component_of[p]];

    if (it + 1 == max_iterations) {
      out.expectation = std::move(e);
      out.index = std::move(idx);
      out.trace = std::move(tr);
      out.stagnated = true;
    }
  }
  return out;
}

Mat expectation_onto_relative_commutant(const Mat& x, const std::vector<Mat>& quasi,
                                        double scalar_index) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (const Mat& l : quasi) out += l * x * l.adjoint();
  return out / scalar_index;
}

}  // namespace qwb
