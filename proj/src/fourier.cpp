#include "qwb/fourier.hpp"

#include <cmath>
#include <limits>

namespace qwb {

std::string space_name(Space s) {
  switch (s) {
    case Space::BprimeA1: return "B'∩A1";
    case Space::AprimeA2: return "A'∩A2";
    case Space::BprimeA: return "B'∩A";
    case Space::AprimeA1: return "A'∩A1";
  }
  return "?";
}

int space_level(Space s) {
  switch (s) {
    case Space::BprimeA1: return 1;
    case Space::AprimeA2: return 2;
    case Space::BprimeA: return 0;
    case Space::AprimeA1: return 1;
  }
  return 0;
}

FourierTransform::FourierTransform(std::shared_ptr<const Tower> tower, const Tolerances& tol)
    : tower_(std::move(tower)), tol_(tol) {
  const Tower& t = *tower_;
  if (t.depth() < 2) throw DomainError("fourier: the tower must have depth two");
  if (!t.base().index.is_scalar()) {
    throw HypothesisError("fourier: the index of the base inclusion is not scalar");
  }
  delta_ = t.delta();
  const TowerLevel& l1 = t.level(1);
  const TowerLevel& l2 = t.level(2);
  b_a_ = std::make_shared<const Algebra>(relative_commutant(t, 0, *t.base().b, tol));
  b_a1_ = std::make_shared<const Algebra>(relative_commutant(t, 1, *l1.images.at(0), tol));
  a_a1_ = std::make_shared<const Algebra>(relative_commutant(t, 1, *l1.images.at(1), tol));
  a_a2_ = std::make_shared<const Algebra>(relative_commutant(t, 2, *l2.images.at(1), tol));
  for (const Mat& l : t.base().quasi.elements) quasi2_.push_back(t.lift(l, 0, 2));
  e1_ = l2.jones.at(0);
  e2_ = l2.jones.at(1);
}

const Algebra& FourierTransform::algebra(Space s) const {
  switch (s) {
    case Space::BprimeA1: return *b_a1_;
    case Space::AprimeA2: return *a_a2_;
    case Space::BprimeA: return *b_a_;
    case Space::AprimeA1: return *a_a1_;
  }
  throw DomainError("fourier: unknown space");
}

Mat FourierTransform::onto_a_prime_a2(const Mat& y) const {
  return expectation_onto_relative_commutant(y, quasi2_, delta_ * delta_);
}

Mat FourierTransform::forward(const Mat& x) const {
  const Mat lifted = tower_->lift(x, 1, 2);
  return std::pow(delta_, 3) * onto_a_prime_a2(lifted * e2_ * e1_);
}

Mat FourierTransform::inverse(const Mat& y) const {
  const Mat down = tower_->level(2).expectation_down(y * e1_ * e2_);
  return std::pow(delta_, 3) * tower_->pull(down, 2, 1);
}

Mat FourierTransform::convolve1(const Mat& x, const Mat& y) const {
  return inverse(forward(y) * forward(x));
}

Mat FourierTransform::convolve2(const Mat& w, const Mat& z) const {
  return forward(inverse(z) * inverse(w));
}

double FourierTransform::membership_defect(Space s, const Mat& x) const {
  const Algebra& alg = algebra(s);
  if (x.rows() != alg.ambient_dim() || x.cols() != alg.ambient_dim()) {
    return std::numeric_limits<double>::infinity();
  }
  return alg.residual(x) / std::max(1.0, x.norm());
}

CommutantElement FourierTransform::element(Space s, const Mat& value) const {
  const double defect = membership_defect(s, value);
  if (!(defect <= tol_.num)) {
    throw InconsistencyError("fourier: value is not in " + space_name(s) + " (defect " +
                             std::to_string(defect) + ")");
  }
  return {space_level(s), s, algebra(s).project(value)};
}

CommutantElement FourierTransform::fourier(const CommutantElement& x) const {
  if (x.space != Space::BprimeA1) throw DomainError("fourier: operand must lie in B'∩A1");
  return element(Space::AprimeA2, forward(x.value));
}

CommutantElement FourierTransform::inverse_fourier(const CommutantElement& y) const {
  if (y.space != Space::AprimeA2) throw DomainError("fourier: operand must lie in A'∩A2");
  return element(Space::BprimeA1, inverse(y.value));
}

CommutantElement FourierTransform::convolution(const CommutantElement& x,
                                               const CommutantElement& y) const {
  if (x.space != y.space) throw DomainError("convolution: operands live in different spaces");
  if (x.space == Space::BprimeA1) return element(x.space, convolve1(x.value, y.value));
  if (x.space == Space::AprimeA2) return element(x.space, convolve2(x.value, y.value));
  throw DomainError("convolution: defined on B'∩A1 and A'∩A2 only");
}

}  // namespace qwb
