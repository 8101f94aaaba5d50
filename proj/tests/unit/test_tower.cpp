#include "doctest.h"

#include <cmath>

#include "qwb/tower.hpp"

using namespace qwb;

namespace {

Mat perm_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Mat p = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) p(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

AlgebraPtr share(Algebra a) { return std::make_shared<const Algebra>(std::move(a)); }

double defect_of_projection(const Mat& p) {
  return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

}  // namespace

TEST_CASE("basic construction of the scalars in M2") {
  auto a = share(Algebra::full(2));
  auto b = share(Algebra::scalars(2));
  const Tower t = build_tower(b, a, TraceState::normalized_ambient(a), 1);
  const TowerLevel& l1 = t.level(1);
  // the right action of scalars is trivial, so A_1 is all of B(L2(M2)) = M4
  CHECK(l1.ambient_dim == 4);
  CHECK(l1.algebra->dim() == 16);
  const Mat& e1 = l1.jones.at(0);
  CHECK(defect_of_projection(e1) < 1e-12);
  CHECK(std::abs(l1.trace(e1) - 0.25) < 1e-10);
  CHECK(l1.generated_defect < 1e-8);
}

TEST_CASE("basic construction of Z2 inside Z2 x Z2") {
  const Mat g1 = perm_matrix({1, 0, 3, 2});
  const Mat g2 = perm_matrix({2, 3, 0, 1});
  auto a = share(algebra_from_generators(4, {g1, g2}));
  auto b = share(algebra_from_generators(4, {g1}));
  const Tower t = build_tower(b, a, TraceState::normalized_ambient(a), 1);
  CHECK(t.index() == doctest::Approx(2.0).epsilon(1e-10));
  const TowerLevel& l1 = t.level(1);
  // oracle: brute-force commutant of the right B-action on L2(A)
  const GnsSpace& gns = *l1.gns;
  std::vector<Mat> rows;
  const Mat r = gns.right_action(g1);
  const Algebra brute = commutant(algebra_from_generators(4, {r}), Algebra::full(4));
  CHECK(brute.dim() == 8);
  CHECK(l1.algebra->dim() == 8);
  CHECK(span_distance(brute, *l1.algebra) < 1e-8);
  CHECK(std::abs(l1.trace(l1.jones.at(0)) - 0.5) < 1e-10);
}

TEST_CASE("B = A gives a trivial basic construction") {
  auto a = share(Algebra::full(2));
  const Tower t = build_tower(a, a, TraceState::normalized_ambient(a), 1);
  const TowerLevel& l1 = t.level(1);
  CHECK((l1.jones.at(0) - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK(l1.algebra->dim() == a->dim());
}

TEST_CASE("tower relations up to level two") {
  auto a = share(Algebra::full(2));
  auto b = share(Algebra::scalars(2));
  const Tower t = build_tower(b, a, TraceState::normalized_ambient(a), 2);
  const double delta2 = t.index();
  CHECK(delta2 == doctest::Approx(4.0).epsilon(1e-10));
  const TowerLevel& l1 = t.level(1);
  const TowerLevel& l2 = t.level(2);
  CHECK(l2.ambient_dim == 16);
  const Mat& e1 = l2.jones.at(0);
  const Mat& e2 = l2.jones.at(1);
  CHECK(defect_of_projection(e1) < 1e-10);
  CHECK(defect_of_projection(e2) < 1e-10);

  // Temperley-Lieb relations
  CHECK((e2 * e1 * e2 - e2 / delta2).norm() < 1e-10);
  CHECK((e1 * e2 * e1 - e1 / delta2).norm() < 1e-10);
  // Markov traces and compatibility of consecutive traces
  CHECK(std::abs(l2.trace(e2) - 1.0 / delta2) < 1e-10);
  CHECK(std::abs(l2.trace(e1) - l1.trace(l1.jones.at(0))) < 1e-10);
  Rng rng(5);
  for (int s = 0; s < 5; ++s) {
    const Mat x = l1.algebra->random_element(rng);
    CHECK(std::abs(l2.trace(t.lift(x, 1, 2)) - l1.trace(x)) < 1e-10);
    CHECK((t.pull(t.lift(x, 1, 2), 2, 1) - x).norm() < 1e-10);
  }

  // e x e = E(x) e at level one, for x in a basis of A
  const Expectation& e = t.base().expectation;
  const Mat& j1 = l1.jones.at(0);
  for (int i = 0; i < a->dim(); ++i) {
    const Mat x = a->basis_element(i);
    const Mat lhs = j1 * t.lift(x, 0, 1) * j1;
    const Mat rhs = t.lift(e(x), 0, 1) * j1;
    CHECK((lhs - rhs).norm() < 1e-10);
    // Markov: tr_1(x e_1) = tr(x) / delta^2
    CHECK(std::abs(l1.trace(t.lift(x, 0, 1) * j1) - t.base().trace(x) / delta2) < 1e-10);
  }
}

TEST_CASE("intermediate construction for the diagonal of M2") {
  auto a = share(Algebra::full(2));
  auto b = share(Algebra::scalars(2));
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1.0;
  const Algebra c = algebra_from_generators(2, {p});
  const Tower t = build_tower(b, a, TraceState::normalized_ambient(a), 1);
  const IntermediateConstruction ic = intermediate_basic_construction(t, c);
  CHECK(defect_of_projection(ic.jones) < 1e-12);
  CHECK(std::abs(ic.jones.trace().real() - 2.0) < 1e-10);
  CHECK(std::abs(t.level(1).trace(ic.jones) - 0.5) < 1e-10);
  const Mat& e1 = t.level(1).jones.at(0);
  CHECK((ic.jones * e1 - e1).norm() < 1e-12);
  CHECK((e1 * ic.jones - e1).norm() < 1e-12);

  // C = A and C = B are the trivial cases
  CHECK((intermediate_basic_construction(t, *a).jones - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK((intermediate_basic_construction(t, *b).jones - e1).norm() < 1e-12);
  CHECK_THROWS_AS(intermediate_basic_construction(t, Algebra::scalars(3)), DomainError);
}
