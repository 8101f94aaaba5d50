#include "qwb/trace.hpp"

#include <algorithm>
#include <cmath>

namespace qwb {

TraceState::TraceState(AlgebraPtr algebra, std::vector<double> weights)
    : algebra_(std::move(algebra)), weights_(std::move(weights)) {
  const auto& blocks = algebra_->blocks();
  if (weights_.size() != blocks.size()) {
    throw DomainError("trace: one weight per block required");
  }
  const int n = algebra_->ambient_dim();
  density_ = Mat::Zero(n, n);
  double total = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!(weights_[b] > 0.0)) throw DomainError("trace: weights must be positive");
    total += weights_[b] * blocks[b].size;
    density_ += (weights_[b] / blocks[b].multiplicity) * algebra_->central_projections()[b];
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("trace: weights are not normalized");
  }
}

TraceState TraceState::normalized_ambient(AlgebraPtr algebra) {
  const int n = algebra->ambient_dim();
  std::vector<double> w;
  for (const Block& b : algebra->blocks()) {
    w.push_back(static_cast<double>(b.multiplicity) / n);
  }
  return TraceState(std::move(algebra), std::move(w));
}

cplx TraceState::operator()(const Mat& x) const {
  return density_.cwiseProduct(x.transpose()).sum();
}

double TraceState::tracial_defect() const {
  double worst = 0.0;
  const auto basis = algebra_->basis();
  for (const Mat& a : basis) {
    for (const Mat& b : basis) {
      worst = std::max(worst, std::abs((*this)(a * b) - (*this)(b * a)));
    }
  }
  return worst;
}

TraceState restrict_trace(const TraceState& tr, AlgebraPtr sub) {
  std::vector<double> w;
  const auto& blocks = sub->blocks();
  double total = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    w.push_back(tr(sub->central_projections()[b]).real() / blocks[b].size);
    total += w.back() * blocks[b].size;
  }
  // absorb rounding so that the normalization check is exact
  for (double& x : w) x /= total;
  return TraceState(std::move(sub), std::move(w));
}

cplx l2_inner(const TraceState& tr, const Mat& x, const Mat& y) {
  return tr(x.adjoint() * y);
}

double l2_norm(const TraceState& tr, const Mat& x) {
  return std::sqrt(std::max(0.0, l2_inner(tr, x, x).real()));
}

double min_projection_trace(const TraceState& tr) {
  return *std::min_element(tr.weights().begin(), tr.weights().end());
}

}  // namespace qwb
