#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qwb/algebra.hpp"
#include "qwb/expectation.hpp"
#include "qwb/spectral.hpp"
#include "qwb/trace.hpp"

using namespace qwb;

namespace {

Mat diag(std::initializer_list<double> v) {
  Vec d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

// permutation matrix sending basis vector j to perm[j]
Mat perm_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Mat p = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) p(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

// S3 as permutations of {0,1,2}, elements listed explicitly; left regular
// representation by brute-force composition lookup.
std::vector<std::vector<int>> s3_elements() {
  std::vector<int> p{0, 1, 2};
  std::vector<std::vector<int>> out;
  do { out.push_back(p); } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Mat s3_left(const std::vector<int>& g) {
  const auto els = s3_elements();
  std::vector<int> image(els.size());
  for (std::size_t j = 0; j < els.size(); ++j) {
    std::vector<int> gh(3);
    for (int k = 0; k < 3; ++k) gh[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(els[j][static_cast<std::size_t>(k)])];
    image[j] = static_cast<int>(std::find(els.begin(), els.end(), gh) - els.begin());
  }
  return perm_matrix(image);
}

}  // namespace

TEST_CASE("generated algebras") {
  SUBCASE("empty generator set gives the scalars") {
    const Algebra a = algebra_from_generators(2, {});
    CHECK(a.dim() == 1);
    CHECK(a.blocks() == std::vector<Block>{{2, 1}});
  }
  SUBCASE("an idempotent generates the diagonal") {
    const Algebra a = algebra_from_generators(2, {diag({1, 0})});
    CHECK(a.dim() == 2);
    CHECK(a.blocks().size() == 2);
    for (const Block& b : a.blocks()) CHECK(b.size == 1);
  }
  SUBCASE("regular representation of S3 has blocks 1, 1, 2") {
    const Algebra a = algebra_from_generators(6, {s3_left({1, 0, 2}), s3_left({1, 2, 0})});
    CHECK(a.dim() == 6);
    std::vector<int> sizes;
    for (const Block& b : a.blocks()) sizes.push_back(b.size);
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{1, 1, 2});
    CHECK(a.closure_defect() < 1e-9);
    // the two-dimensional irrep appears twice in the regular representation
    for (const Block& b : a.blocks()) CHECK(b.multiplicity == b.size);
  }
  SUBCASE("central projections are ordered by decreasing rank") {
    const Algebra a = algebra_from_generators(3, {diag({1, 0, 0})});
    REQUIRE(a.central_projections().size() == 2);
    CHECK(a.central_projections()[0].trace().real() == doctest::Approx(2.0));
  }
}

TEST_CASE("commutants") {
  const Algebra m2 = Algebra::full(2);
  CHECK(commutant(Algebra::scalars(2), m2).dim() == 4);
  const Algebra d2 = algebra_from_generators(2, {diag({1, 0})});
  const Algebra c = commutant(d2, m2);
  CHECK(c.dim() == 2);
  CHECK(span_intersection(c.basis_matrix(), d2.basis_matrix(), 1e-9).cols() == 2);

  SUBCASE("abelian ambient: the commutant of a subalgebra is everything") {
    // Z2 x Z2 regular representation, generated by two commuting swaps
    const Mat a = perm_matrix({1, 0, 3, 2});
    const Mat b = perm_matrix({2, 3, 0, 1});
    const Algebra amb = algebra_from_generators(4, {a, b});
    const Algebra sub = algebra_from_generators(4, {a});
    CHECK(amb.dim() == 4);
    CHECK(commutant(sub, amb).dim() == 4);
  }
}

TEST_CASE("double commutant returns the algebra") {
  const Algebra a = algebra_from_generators(6, {s3_left({1, 0, 2}), s3_left({1, 2, 0})});
  const Algebra full = Algebra::full(6);
  const Algebra once = commutant(a, full);
  CHECK(once.dim() == 6);  // right regular representation
  const Algebra twice = commutant(once, full);
  REQUIRE(twice.dim() == a.dim());
  CHECK(span_intersection(twice.basis_matrix(), a.basis_matrix(), 1e-8).cols() == a.dim());
  // both routes to the commutant agree
  const Algebra via_units = commutant_in_full(a);
  CHECK(span_intersection(via_units.basis_matrix(), once.basis_matrix(), 1e-8).cols() == 6);
}

TEST_CASE("traces and the L2 pairing") {
  auto m2 = std::make_shared<const Algebra>(Algebra::full(2));
  const TraceState tr = TraceState::normalized_ambient(m2);
  CHECK(std::abs(l2_inner(tr, Mat::Identity(2, 2), Mat::Identity(2, 2)) - 1.0) < 1e-14);
  const Mat p = diag({1, 0});
  CHECK(std::abs(l2_inner(tr, p, p) - 0.5) < 1e-14);
  CHECK(min_projection_trace(tr) == doctest::Approx(0.5));
  CHECK(tr.tracial_defect() < 1e-12);
  auto scalars = std::make_shared<const Algebra>(Algebra::scalars(2));
  CHECK(min_projection_trace(TraceState::normalized_ambient(scalars)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(TraceState(m2, {0.7}), DomainError);
}

TEST_CASE("eta calculus") {
  CHECK(eta_scalar(0.25) == doctest::Approx(0.25 * std::log(4.0)).epsilon(1e-14));
  CHECK(eta_scalar(0.0) == 0.0);
  CHECK(eta_operator(diag({1, 0})).norm() < 1e-14);
  const Mat half = 0.5 * diag({1, 0});
  CHECK((eta_operator(half) - (std::log(2.0) / 2) * diag({1, 0})).norm() < 1e-14);
  CHECK_THROWS_AS(eta_operator(diag({-0.1, 0.5})), DomainError);

  Rng rng(7);
  for (int s = 0; s < 20; ++s) {
    const Mat g = rng.gaussian(3, 3);
    Mat x = g.adjoint() * g;
    x /= op_norm(x);  // spectrum in [0, 1]
    const Mat u = rng.haar_unitary(3);
    CHECK((eta_operator(u * x * u.adjoint()) - u * eta_operator(x) * u.adjoint()).norm() < 1e-10);
    auto m3 = std::make_shared<const Algebra>(Algebra::full(3));
    CHECK(entropy_of_positive(x, TraceState::normalized_ambient(m3)) >= -1e-12);
  }
}

TEST_CASE("trace-preserving expectations") {
  auto m2 = std::make_shared<const Algebra>(Algebra::full(2));
  auto d2 = std::make_shared<const Algebra>(algebra_from_generators(2, {diag({1, 0})}));
  const TraceState tr = TraceState::normalized_ambient(m2);

  SUBCASE("onto the diagonal keeps the diagonal entries") {
    const Expectation e = trace_expectation(tr, d2);
    Mat x(2, 2);
    x << cplx(1, 2), 3, cplx(0, -4), 5;
    const Mat ex = e(x);
    CHECK(std::abs(ex(0, 0) - x(0, 0)) < 1e-14);
    CHECK(std::abs(ex(1, 1) - x(1, 1)) < 1e-14);
    CHECK(std::abs(ex(0, 1)) < 1e-14);
    CHECK(e.idempotency_defect() < 1e-12);
    CHECK(e.trace_defect() < 1e-12);
  }
  SUBCASE("onto the whole algebra is the identity map") {
    const Expectation e = trace_expectation(tr, m2);
    Rng rng(3);
    const Mat x = m2->random_element(rng);
    CHECK((e(x) - x).norm() < 1e-12);
  }
  SUBCASE("self-adjoint for the trace pairing") {
    Rng rng(11);
    const Algebra s3 = algebra_from_generators(6, {s3_left({1, 0, 2}), s3_left({1, 2, 0})});
    auto a = std::make_shared<const Algebra>(s3);
    const TraceState t6 = TraceState::normalized_ambient(a);
    auto h = std::make_shared<const Algebra>(algebra_from_generators(6, {s3_left({1, 0, 2})}));
    const Expectation e = trace_expectation(t6, h);
    for (int s = 0; s < 10; ++s) {
      const Mat x = a->random_element(rng);
      const Mat y = a->random_element(rng);
      CHECK(std::abs(l2_inner(t6, e(x), y) - l2_inner(t6, x, e(y))) < 1e-10);
    }
    // coefficient restriction: the image of a transposition outside H vanishes
    CHECK(e(s3_left({2, 1, 0})).norm() < 1e-12);
    CHECK((e(s3_left({1, 0, 2})) - s3_left({1, 0, 2})).norm() < 1e-12);
  }
}

TEST_CASE("quasi-bases and Watatani index") {
  auto m2 = std::make_shared<const Algebra>(Algebra::full(2));
  const TraceState tr = TraceState::normalized_ambient(m2);

  SUBCASE("identity expectation has index one") {
    const Expectation e = trace_expectation(tr, m2);
    const IndexData idx = watatani_index(e);
    REQUIRE(idx.is_scalar());
    CHECK(*idx.scalar_index == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("diagonal expectation on M_n has index n") {
    for (int n = 2; n <= 4; ++n) {
      auto mn = std::make_shared<const Algebra>(Algebra::full(n));
      std::vector<Mat> gens;
      for (int i = 0; i < n; ++i) {
        Mat p = Mat::Zero(n, n);
        p(i, i) = 1.0;
        gens.push_back(p);
      }
      auto dn = std::make_shared<const Algebra>(algebra_from_generators(n, gens));
      const Expectation e = trace_expectation(TraceState::normalized_ambient(mn), dn);
      const QuasiBasis qb = quasi_basis(e);
      CHECK(qb.reconstruction_defect(e) < 1e-10);
      // oracle: the matrix units {e_ij} form a quasi-basis with sum e_ij e_ji = n
      CHECK(*watatani_index(qb).scalar_index == doctest::Approx(n).epsilon(1e-10));
    }
  }
  SUBCASE("scalars in M_n have index n^2, independent of the quasi-basis") {
    for (int n = 2; n <= 3; ++n) {
      auto mn = std::make_shared<const Algebra>(Algebra::full(n));
      auto c = std::make_shared<const Algebra>(Algebra::scalars(n));
      const Expectation e = trace_expectation(TraceState::normalized_ambient(mn), c);
      const IndexData a = watatani_index(quasi_basis(e));
      const IndexData b = watatani_index(quasi_basis(e, {}, 99));
      CHECK(*a.scalar_index == doctest::Approx(n * n).epsilon(1e-10));
      CHECK((a.watatani_index - b.watatani_index).norm() < 1e-8);
    }
  }
  SUBCASE("subgroup of S3 of order two has index three") {
    auto a = std::make_shared<const Algebra>(
        algebra_from_generators(6, {s3_left({1, 0, 2}), s3_left({1, 2, 0})}));
    auto h = std::make_shared<const Algebra>(algebra_from_generators(6, {s3_left({1, 0, 2})}));
    const Expectation e = trace_expectation(TraceState::normalized_ambient(a), h);
    const QuasiBasis qb = quasi_basis(e);
    CHECK(qb.elements.size() >= 3);
    CHECK(*watatani_index(qb).scalar_index == doctest::Approx(3.0).epsilon(1e-10));
    // coset representatives e, (13), (23) also reconstruct
    QuasiBasis cosets;
    cosets.elements = {Mat::Identity(6, 6), s3_left({2, 1, 0}), s3_left({0, 2, 1})};
    CHECK(cosets.reconstruction_defect(e) < 1e-10);
  }
}

TEST_CASE("minimal expectations") {
  auto m2 = std::make_shared<const Algebra>(Algebra::full(2));
  auto c = std::make_shared<const Algebra>(Algebra::scalars(2));
  const MinimalExpectation me = minimal_expectation(c, m2);
  CHECK(!me.stagnated);
  CHECK(*me.index.scalar_index == doctest::Approx(4.0).epsilon(1e-9));

  const MinimalExpectation same = minimal_expectation(m2, m2);
  CHECK(*same.index.scalar_index == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("starting from a skewed trace still reaches the minimum") {
    auto d2 = std::make_shared<const Algebra>(algebra_from_generators(2, {diag({1, 0})}));
    // C ⊂ D2: the index element of a weighted expectation is p1/w1 + p2/w2
    const TraceState skew(d2, {0.9, 0.1});
    const MinimalExpectation m = minimal_expectation(
        std::make_shared<const Algebra>(Algebra::scalars(2)), d2, skew);
    CHECK(*m.index.scalar_index == doctest::Approx(2.0).epsilon(1e-8));
  }
}
