#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qwb/tower.hpp"

namespace qwb {

/// Relative commutants the Fourier calculus moves between.
enum class Space { BprimeA1, AprimeA2, BprimeA, AprimeA1 };

std::string space_name(Space s);
int space_level(Space s);

struct CommutantElement {
  int level = 1;
  Space space = Space::BprimeA1;
  Mat value;
};

/// Fourier transform B'∩A_1 -> A'∩A_2 on a tower of depth two:
///   F(x)    = delta^3 E_{A'∩A_2}(x e_2 e_1)
///   F^-1(y) = delta^3 E^{A_2}_{A_1}(y e_1 e_2)
/// with E_{A'∩A_2} computed by averaging over a quasi-basis of the base
/// inclusion.
class FourierTransform {
 public:
  explicit FourierTransform(std::shared_ptr<const Tower> tower, const Tolerances& tol = {});

  const Tower& tower() const { return *tower_; }
  const std::shared_ptr<const Tower>& tower_ptr() const { return tower_; }
  double delta() const { return delta_; }
  const Tolerances& tolerances() const { return tol_; }

  /// The relative commutant with the given tag, on its level's space.
  const Algebra& algebra(Space s) const;
  const TraceState& trace(int level) const { return tower_->level(level).trace; }

  Mat forward(const Mat& x) const;
  Mat inverse(const Mat& y) const;
  /// x ⋆ y = F^-1(F(y) F(x)) on B'∩A_1.
  Mat convolve1(const Mat& x, const Mat& y) const;
  /// w ⋆ z = F(F^-1(z) F^-1(w)) on A'∩A_2.
  Mat convolve2(const Mat& w, const Mat& z) const;

  /// (1 / delta^2) sum_i l_i y l_i^* for y on the level-2 space.
  Mat onto_a_prime_a2(const Mat& y) const;

  /// Projects onto the tagged commutant after checking that the value is
  /// already there up to the verification tolerance.
  CommutantElement element(Space s, const Mat& value) const;
  CommutantElement fourier(const CommutantElement& x) const;
  CommutantElement inverse_fourier(const CommutantElement& y) const;
  CommutantElement convolution(const CommutantElement& x, const CommutantElement& y) const;

  /// Largest departure of x from the tagged commutant (span residual and
  /// commutator with the small algebra), relative to max(1, |x|).
  double membership_defect(Space s, const Mat& x) const;

 private:
  std::shared_ptr<const Tower> tower_;
  Tolerances tol_;
  double delta_ = 0.0;
  AlgebraPtr b_a1_, a_a2_, b_a_, a_a1_;
  std::vector<Mat> quasi2_;  // base quasi-basis on the level-2 space
  Mat e1_, e2_;              // Jones projections on the level-2 space
};

}  // namespace qwb
