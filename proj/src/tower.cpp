#include "qwb/tower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace qwb {

namespace {

// largest L^2 dimension on which the generated-algebra cross-check runs
constexpr int kMaxCrossCheckDim = 40;

// Appends the columns of `cols` to the tr-orthonormal family `q` (with
// weighted twins `w`), Gram-Schmidt in the inner product vec(x)^* vec(y rho).
void extend_tr_orthonormal(Mat& q, Mat& w, Eigen::Index& count, const Mat& cols,
                           const Mat& rho, int n, double tol) {
  for (Eigen::Index k = 0; k < cols.cols(); ++k) {
    Vec v = cols.col(k);
    auto weigh = [&](const Vec& x) { return flatten(unflatten(x, n) * rho); };
    Vec vw = weigh(v);
    const double norm0 = std::sqrt(std::max(0.0, v.dot(vw).real()));
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2 && count > 0; ++pass) {
      const Vec c = w.leftCols(count).adjoint() * v;
      v -= q.leftCols(count) * c;
      vw -= w.leftCols(count) * c;
    }
    const double norm1 = std::sqrt(std::max(0.0, v.dot(vw).real()));
    if (norm1 <= tol * norm0) continue;
    q.col(count) = v / norm1;
    w.col(count) = vw / norm1;
    ++count;
  }
}

// Coefficients of tr(x) in the block weights: tr(x) = sum_b w_b Tr(z_b x) / m_b.
std::vector<cplx> weight_coefficients(const Algebra& alg, const Mat& x) {
  std::vector<cplx> out;
  for (std::size_t b = 0; b < alg.blocks().size(); ++b) {
    out.push_back(alg.central_projections()[b].cwiseProduct(x.transpose()).sum() /
                  static_cast<double>(alg.blocks()[b].multiplicity));
  }
  return out;
}

// Solves tr_1(a e b) = tr(ab) / delta^2 and tr_1(a) = tr(a) for the block
// weights of the upper algebra.
std::vector<double> solve_upper_trace(const GnsSpace& gns, const Algebra& upper,
                                      const Mat& jones, double delta2,
                                      const Tolerances& tol, double& residual) {
  const TraceState& tr = gns.trace();
  const Algebra& a = tr.algebra();
  const int d = gns.dim();
  const int da = a.dim();
  const std::size_t nb = upper.blocks().size();

  std::vector<Mat> images;
  for (int i = 0; i < da; ++i) images.push_back(gns.embed(a.basis_element(i)));

  // rows: Tr(z_b a_i e a_j) / m_b, computed as (z_b a_i e)^T . a_j
  const Eigen::Index rows = static_cast<Eigen::Index>(da) * da + da;
  Mat lhs = Mat::Zero(rows, static_cast<Eigen::Index>(nb));
  Vec rhs = Vec::Zero(rows);
  Mat right(static_cast<Eigen::Index>(d) * d, da);
  for (int j = 0; j < da; ++j) right.col(j) = flatten(images[static_cast<std::size_t>(j)]);
  for (std::size_t b = 0; b < nb; ++b) {
    const Mat& z = upper.central_projections()[b];
    const double m = upper.blocks()[b].multiplicity;
    Mat left(static_cast<Eigen::Index>(d) * d, da);
    for (int i = 0; i < da; ++i) {
      left.col(i) = flatten(Mat((z * images[static_cast<std::size_t>(i)] * jones).transpose()));
    }
    const Mat block = left.transpose() * right / m;  // (i, j) entry
    for (int i = 0; i < da; ++i) {
      for (int j = 0; j < da; ++j) {
        lhs(static_cast<Eigen::Index>(i) * da + j, static_cast<Eigen::Index>(b)) = block(i, j);
      }
    }
  }
  for (int i = 0; i < da; ++i) {
    const Mat ai = a.basis_element(i);
    for (int j = 0; j < da; ++j) {
      rhs(static_cast<Eigen::Index>(i) * da + j) = tr(ai * a.basis_element(j)) / delta2;
    }
    const auto c = weight_coefficients(upper, images[static_cast<std::size_t>(i)]);
    const Eigen::Index r = static_cast<Eigen::Index>(da) * da + i;
    for (std::size_t b = 0; b < nb; ++b) lhs(r, static_cast<Eigen::Index>(b)) = c[b];
    rhs(r) = tr(ai);
  }

  // real least squares on the stacked real and imaginary parts
  RMat lr(2 * rows, static_cast<Eigen::Index>(nb));
  RVec rr(2 * rows);
  lr << lhs.real(), lhs.imag();
  rr << rhs.real(), rhs.imag();
  const RVec w = lr.colPivHouseholderQr().solve(rr);
  residual = (lr * w - rr).norm();
  if (!(residual <= tol.num * std::max(1.0, rr.norm()))) {
    throw InconsistencyError("basic construction: trace system is inconsistent (residual " +
                             std::to_string(residual) + ")");
  }
  std::vector<double> out(w.data(), w.data() + w.size());
  double total = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    if (!(out[b] > 0.0)) {
      throw InconsistencyError("basic construction: trace system gives a non-positive weight");
    }
    total += out[b] * upper.blocks()[b].size;
  }
  for (double& x : out) x /= total;
  return out;
}

}  // namespace

GnsSpace::GnsSpace(const TraceState& tr, const Algebra& leading, const Tolerances& tol)
    : trace_(tr), n_(tr.algebra().ambient_dim()) {
  const Algebra& a = tr.algebra();
  if (!a.contains(leading, 1e-8)) throw DomainError("gns: leading algebra is not contained");
  const Eigen::Index len = static_cast<Eigen::Index>(n_) * n_;
  basis_.resize(len, a.dim());
  weighted_.resize(len, a.dim());
  Eigen::Index count = 0;
  extend_tr_orthonormal(basis_, weighted_, count, leading.basis_matrix(), tr.density(), n_,
                        tol.alg);
  leading_ = static_cast<int>(count);
  if (leading_ != leading.dim()) throw InconsistencyError("gns: leading basis lost rank");
  extend_tr_orthonormal(basis_, weighted_, count, a.basis_matrix(), tr.density(), n_, tol.alg);
  if (count != a.dim()) throw InconsistencyError("gns: basis lost rank");
  unit_ = coordinates(Mat::Identity(n_, n_));
}

Vec GnsSpace::coordinates(const Mat& x) const { return weighted_.adjoint() * flatten(x); }

Mat GnsSpace::basis_vector(int i) const { return unflatten(basis_.col(i), n_); }

Mat GnsSpace::embed(const Mat& x) const {
  const Eigen::Index d = basis_.cols();
  // the basis memory read as n x (n d) is [v_1 | v_2 | ...]
  const Eigen::Map<const Mat> row(basis_.data(), n_, n_ * d);
  const Mat prod = x * row;
  const Eigen::Map<const Mat> cols(prod.data(), static_cast<Eigen::Index>(n_) * n_, d);
  return weighted_.adjoint() * cols;
}

Mat GnsSpace::right_action(const Mat& x) const {
  const Eigen::Index d = basis_.cols();
  Mat cols(basis_.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j) cols.col(j) = flatten(basis_vector(static_cast<int>(j)) * x);
  return weighted_.adjoint() * cols;
}

Mat GnsSpace::pullback(const Mat& image) const {
  return unflatten(basis_ * (image * unit_), n_);
}

Mat GnsSpace::projection_onto(const Algebra& sub) const {
  Mat coords(dim(), sub.dim());
  for (int k = 0; k < sub.dim(); ++k) coords.col(k) = coordinates(sub.basis_element(k));
  const Mat q = orthonormalize_columns(coords, 1e-9);
  return q * q.adjoint();
}

Mat GnsSpace::leading_projection() const {
  Mat p = Mat::Zero(dim(), dim());
  for (int i = 0; i < leading_; ++i) p(i, i) = 1.0;
  return p;
}

Algebra GnsSpace::embed_algebra(const Algebra& alg) const {
  return map_algebra(alg, dim(), [this](const Mat& x) { return embed(x); });
}

Algebra GnsSpace::right_algebra(const Algebra& alg) const {
  return map_algebra(alg, dim(), [this](const Mat& x) { return right_action(x); });
}

Algebra relative_commutant(const Tower& t, int level, const Algebra& x, const Tolerances& tol) {
  if (level == 0) return commutant(x, *t.base().a, tol);
  const TowerLevel& lk = t.level(level);
  const Algebra& below = *t.level(level - 1).images.back();
  const Algebra right = lk.gns->right_algebra(below);
  std::vector<Mat> products;
  products.reserve(static_cast<std::size_t>(x.dim()) * static_cast<std::size_t>(right.dim()));
  for (int i = 0; i < x.dim(); ++i) {
    const Mat xi = x.basis_element(i);
    for (int j = 0; j < right.dim(); ++j) products.push_back(xi * right.basis_element(j));
  }
  const Algebra joint = Algebra::from_span(lk.ambient_dim, products, {}, tol);
  return commutant_in_full(joint, tol);
}

double span_distance(const Algebra& x, const Algebra& y) {
  if (x.ambient_dim() != y.ambient_dim() || x.dim() != y.dim()) {
    return std::numeric_limits<double>::infinity();
  }
  const Mat& qx = x.basis_matrix();
  const Mat& qy = y.basis_matrix();
  const double dx = (qx - qy * (qy.adjoint() * qx)).norm();
  const double dy = (qy - qx * (qx.adjoint() * qy)).norm();
  return std::max(dx, dy);
}

BasicConstruction basic_construction(const Expectation& e, const Tolerances& tol) {
  const TraceState& tr = e.trace();
  const Algebra& a = e.source();
  const Algebra& b = e.target();

  const IndexData idx = watatani_index(e, tol);
  if (!idx.is_scalar()) {
    throw HypothesisError("basic construction: the Watatani index is not scalar");
  }

  BasicConstruction out;
  out.delta2 = *idx.scalar_index;
  auto gns = std::make_shared<GnsSpace>(tr, b, tol);
  out.gns = gns;
  out.jones = gns->leading_projection();
  out.sub_image = std::make_shared<const Algebra>(gns->embed_algebra(b));
  out.alg_image = std::make_shared<const Algebra>(gns->embed_algebra(a));
  out.upper = std::make_shared<const Algebra>(commutant_in_full(gns->right_algebra(b), tol));

  // Cross-check against the algebra generated by A and e. Saturation costs
  // grow like dim(A_1)^2 n^2, so it is skipped on large spaces.
  out.generated_defect = std::numeric_limits<double>::quiet_NaN();
  if (gns->dim() <= kMaxCrossCheckDim) {
    std::vector<Mat> gens;
    for (const Mat& g : a.generators()) gens.push_back(gns->embed(g));
    gens.push_back(out.jones);
    const Algebra generated = algebra_from_generators(gns->dim(), gens, tol);
    out.generated_defect = span_distance(*out.upper, generated);
    if (!(out.generated_defect <= tol.num * std::sqrt(static_cast<double>(out.upper->dim())))) {
      throw InconsistencyError("basic construction: commutant of the right action differs "
                               "from the algebra generated by A and e");
    }
  }

  std::vector<double> weights = solve_upper_trace(*gns, *out.upper, out.jones, out.delta2, tol,
                                                  out.trace_system_residual);
  out.upper_trace = TraceState(out.upper, std::move(weights));
  out.down = trace_expectation(out.upper_trace, out.alg_image, tol);
  return out;
}

Tower make_tower(AlgebraPtr b, AlgebraPtr a, const TraceState& tr, const Tolerances& tol) {
  if (tr.algebra().dim() != a->dim() || span_distance(tr.algebra(), *a) > 1e-8) {
    throw DomainError("tower: the trace lives on a different algebra");
  }
  if (!a->contains(*b, 1e-8)) throw DomainError("tower: B is not contained in A");
  BaseInclusion base{b, a, tr, trace_expectation(tr, b, tol), {}, {}};
  base.quasi = quasi_basis(base.expectation, tol);
  base.index = watatani_index(base.quasi, tol);

  TowerLevel level0;
  level0.level = 0;
  level0.ambient_dim = a->ambient_dim();
  level0.algebra = a;
  level0.images = {b};
  level0.trace = tr;
  level0.expectation_down = base.expectation;
  return Tower(std::move(base), std::move(level0));
}

Tower extend_tower(Tower t, const Tolerances& tol) {
  const int k = t.depth();
  const TowerLevel& top = t.level(k);
  BasicConstruction bc = basic_construction(top.expectation_down, tol);

  TowerLevel next;
  next.level = k + 1;
  next.ambient_dim = bc.gns->dim();
  next.algebra = bc.upper;
  for (const AlgebraPtr& img : top.images) {
    next.images.push_back(std::make_shared<const Algebra>(bc.gns->embed_algebra(*img)));
  }
  next.images.push_back(bc.alg_image);
  for (const Mat& e : top.jones) next.jones.push_back(bc.gns->embed(e));
  next.jones.push_back(bc.jones);
  next.trace = bc.upper_trace;
  next.expectation_down = bc.down;
  next.gns = bc.gns;
  next.generated_defect = bc.generated_defect;
  next.trace_system_residual = bc.trace_system_residual;
  t.push_level(std::move(next));
  return t;
}

Tower build_tower(AlgebraPtr b, AlgebraPtr a, const TraceState& tr, int depth,
                  const Tolerances& tol) {
  if (depth < 0 || depth > 2) throw DomainError("tower: depth must be 0, 1 or 2");
  Tower t = make_tower(std::move(b), std::move(a), tr, tol);
  for (int k = 0; k < depth; ++k) t = extend_tower(std::move(t), tol);
  return t;
}

Mat Tower::lift(const Mat& x, int from, int to) const {
  if (from > to || to > depth()) throw DomainError("tower: invalid lift levels");
  Mat y = x;
  for (int k = from + 1; k <= to; ++k) y = level(k).gns->embed(y);
  return y;
}

Mat Tower::pull(const Mat& x, int from, int to) const {
  if (to > from || from > depth()) throw DomainError("tower: invalid pull levels");
  Mat y = x;
  for (int k = from; k > to; --k) y = level(k).gns->pullback(y);
  return y;
}

Algebra Tower::lift_algebra(const Algebra& alg, int from, int to) const {
  if (from == to) return alg;
  return map_algebra(alg, level(to).ambient_dim,
                     [&](const Mat& x) { return lift(x, from, to); });
}

IntermediateConstruction intermediate_basic_construction(const Tower& t, const Algebra& c,
                                                         const Tolerances& tol) {
  if (t.depth() < 1) throw DomainError("intermediate construction needs a tower of depth 1");
  const Algebra& a = *t.base().a;
  const Algebra& b = *t.base().b;
  if (!a.contains(c, 1e-8) || !c.contains(b, 1e-8)) {
    throw DomainError("intermediate construction: C is not between B and A");
  }
  const GnsSpace& gns = *t.level(1).gns;
  IntermediateConstruction out;
  out.jones = gns.projection_onto(c);
  out.dual = std::make_shared<const Algebra>(commutant_in_full(gns.right_algebra(c), tol));

  std::vector<Mat> gens;
  for (const Mat& g : a.generators()) gens.push_back(gns.embed(g));
  gens.push_back(out.jones);
  const Algebra generated = algebra_from_generators(gns.dim(), gens, tol);
  out.generated_defect = span_distance(*out.dual, generated);
  if (!(out.generated_defect <= tol.num * std::sqrt(static_cast<double>(out.dual->dim())))) {
    throw InconsistencyError("intermediate construction: the two descriptions of C_1 differ");
  }
  return out;
}

}  // namespace qwb
