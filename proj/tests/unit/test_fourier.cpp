#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "qwb/fourier.hpp"
#include "qwb/models.hpp"

using namespace qwb;

namespace {

struct Case {
  std::string name;
  std::shared_ptr<const FourierTransform> f;
};

std::shared_ptr<const FourierTransform> transform_for(const ModelData& m) {
  auto t = std::make_shared<const Tower>(build_tower(m.b, m.a, m.trace, 2));
  return std::make_shared<const FourierTransform>(t);
}

const std::vector<Case>& cases() {
  static const std::vector<Case> all = [] {
    const GroupSpec klein = GroupSpec::product(GroupSpec::cyclic(2), GroupSpec::cyclic(2));
    return std::vector<Case>{
        {"klein", transform_for(group_model(klein, {0, 2}, {0, 1}))},
        {"hadamard", transform_for(spin_model(named_unitary("hadamard2", 2)))},
        {"rotation", transform_for(spin_model(named_unitary("rotation:0.5235987755982988", 2)))},
        {"z3 in itself", transform_for(group_model(GroupSpec::cyclic(3), {0}, {0}))},
    };
  }();
  return all;
}

double dev(const Mat& x, const Mat& y) { return max_abs(x - y); }

}  // namespace

TEST_CASE("Fourier transform is an isometry") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    const FourierTransform& f = *c.f;
    const Algebra& src = f.algebra(Space::BprimeA1);
    Rng rng(11);
    for (int s = 0; s < 10; ++s) {
      const Mat x = src.random_element(rng);
      const Mat y = src.random_element(rng);
      const cplx lhs = l2_inner(f.trace(2), f.forward(x), f.forward(y));
      const cplx rhs = l2_inner(f.trace(1), x, y);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("Fourier transform lands in A'∩A2 and inverts") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    const FourierTransform& f = *c.f;
    Rng rng(12);
    for (int s = 0; s < 5; ++s) {
      const Mat x = f.algebra(Space::BprimeA1).random_element(rng);
      const Mat y = f.algebra(Space::AprimeA2).random_element(rng);
      CHECK(f.membership_defect(Space::AprimeA2, f.forward(x)) < 1e-8);
      CHECK(f.membership_defect(Space::BprimeA1, f.inverse(y)) < 1e-8);
      CHECK(dev(f.inverse(f.forward(x)), x) < 1e-8);
      CHECK(dev(f.forward(f.inverse(y)), y) < 1e-8);
    }
    // dimensions match, as they must for a bijection
    CHECK(f.algebra(Space::BprimeA1).dim() == f.algebra(Space::AprimeA2).dim());
  }
}

TEST_CASE("convolution algebra") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    const FourierTransform& f = *c.f;
    const double delta = f.delta();
    const Mat& e1 = f.tower().level(1).jones.at(0);
    Rng rng(13);
    for (int s = 0; s < 5; ++s) {
      const Mat x = f.algebra(Space::BprimeA1).random_element(rng);
      const Mat y = f.algebra(Space::BprimeA1).random_element(rng);
      const Mat z = f.algebra(Space::BprimeA1).random_element(rng);
      CHECK(dev(f.convolve1(f.convolve1(x, y), z), f.convolve1(x, f.convolve1(y, z))) < 1e-8);
      CHECK(dev(f.convolve1(x, y).adjoint(), f.convolve1(x.adjoint(), y.adjoint())) < 1e-8);
      // delta e_1 is the unit of the convolution on B'∩A1
      CHECK(dev(f.convolve1(x, delta * e1), x) < 1e-8);
      CHECK(dev(f.convolve1(delta * e1, x), x) < 1e-8);

      const Mat u = f.algebra(Space::AprimeA2).random_element(rng);
      const Mat v = f.algebra(Space::AprimeA2).random_element(rng);
      const Mat w = f.algebra(Space::AprimeA2).random_element(rng);
      CHECK(dev(f.convolve2(f.convolve2(u, v), w), f.convolve2(u, f.convolve2(v, w))) < 1e-8);
      CHECK(dev(f.convolve2(u, v).adjoint(), f.convolve2(u.adjoint(), v.adjoint())) < 1e-8);
    }
  }
}

TEST_CASE("averaging over the quasi-basis is the trace expectation onto A'∩A2") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    const FourierTransform& f = *c.f;
    const TowerLevel& l2 = f.tower().level(2);
    const Expectation e = trace_expectation(
        l2.trace, std::make_shared<const Algebra>(f.algebra(Space::AprimeA2)));
    Rng rng(14);
    for (int s = 0; s < 5; ++s) {
      const Mat y = l2.algebra->random_element(rng);
      CHECK(dev(f.onto_a_prime_a2(y), e(y)) < 1e-8);
    }
  }
}

TEST_CASE("Fourier transform of the Jones projection") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    const FourierTransform& f = *c.f;
    const Mat& e1 = f.tower().level(1).jones.at(0);
    const Mat f1 = f.forward(e1);
    CHECK(dev(f1, Mat::Identity(f1.rows(), f1.cols()) / f.delta()) < 1e-8);
    // and of the identity: a multiple of e_2
    const Mat& e2 = f.tower().level(2).jones.at(1);
    const Mat fi = f.forward(Mat::Identity(e1.rows(), e1.cols()));
    CHECK(dev(fi, f.delta() * e2) < 1e-8);
  }
}

TEST_CASE("tagged elements") {
  const FourierTransform& f = *cases().front().f;
  Rng rng(15);
  const CommutantElement x = f.element(Space::BprimeA1, f.algebra(Space::BprimeA1).random_element(rng));
  const CommutantElement fx = f.fourier(x);
  CHECK(fx.space == Space::AprimeA2);
  CHECK(fx.level == 2);
  CHECK(dev(f.inverse_fourier(fx).value, x.value) < 1e-8);
  CHECK_THROWS_AS(f.fourier(fx), DomainError);
  CHECK_THROWS_AS(f.convolution(x, fx), DomainError);
  // a generic element of A_1 is not in B'∩A1 when B'∩A1 is proper
  const Mat generic = f.tower().level(1).algebra->random_element(rng);
  if (f.algebra(Space::BprimeA1).dim() < f.tower().level(1).algebra->dim()) {
    CHECK_THROWS_AS(f.element(Space::BprimeA1, generic), InconsistencyError);
  }
  auto shallow = std::make_shared<const Tower>(
      build_tower(cases().front().f->tower().base().b, cases().front().f->tower().base().a,
                  cases().front().f->tower().base().trace, 1));
  CHECK_THROWS_AS(FourierTransform{shallow}, DomainError);
}
