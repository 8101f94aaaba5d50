#include "qwb/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <Eigen/QR>

namespace qwb {

namespace {

constexpr int kMaxSplitAttempts = 20;

// Coefficient vectors (w.r.t. the orthonormal columns of `basis`) of the
// elements commuting with every generator, mapped back to flattened matrices.
Mat commuting_columns(const Mat& basis, int n, const std::vector<Mat>& gens,
                      double rank_tol) {
  const Eigen::Index d = basis.cols();
  if (d == 0) return basis;
  Mat gram = Mat::Zero(d, d);
  Mat k(basis.rows(), d);
  double scale = 0.0;
  for (const Mat& g : gens) {
    scale += g.squaredNorm();
    for (Eigen::Index i = 0; i < d; ++i) {
      const Mat a = unflatten(basis.col(i), n);
      k.col(i) = flatten(a * g - g * a);
    }
    gram.noalias() += k.adjoint() * k;
  }
  const Mat null = psd_null_space(gram, rank_tol, scale);
  return basis * null;
}

bool is_hermitian(const Mat& x, double tol) {
  return (x - x.adjoint()).norm() <= tol * std::max(1.0, x.norm());
}

std::vector<Mat> with_adjoints(const std::vector<Mat>& gens) {
  std::vector<Mat> out;
  for (const Mat& g : gens) {
    if (g.norm() == 0.0) continue;
    out.push_back(g);
    if (!is_hermitian(g, 1e-12)) out.push_back(g.adjoint());
  }
  return out;
}

// Ordering key of a central projection: descending rank, then the row-major
// position and value of the first entry that is not negligible.
auto projection_key(const Mat& p) {
  const double rank = p.trace().real();
  const Eigen::Index n = p.rows();
  Eigen::Index pos = n * n;
  double value = 0.0;
  for (Eigen::Index i = 0; i < n && pos == n * n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(p(i, j)) > 1e-9) {
        pos = i * n + j;
        value = p(i, j).real();
        break;
      }
    }
  }
  return std::make_tuple(-std::llround(rank), pos, value);
}

}  // namespace

Algebra Algebra::from_span(int ambient_dim, const Mat& spanning_columns,
                           std::vector<Mat> generators, const Tolerances& tol) {
  Algebra alg;
  alg.n_ = ambient_dim;
  alg.basis_ = orthonormalize_columns(spanning_columns, tol.alg);
  const int n = ambient_dim;

  if (alg.residual(Mat::Identity(n, n)) > tol.alg * std::sqrt(static_cast<double>(n)) * 10) {
    throw DomainError("algebra span does not contain the ambient identity");
  }

  alg.pick_generators(std::move(generators));

  // centre = commutant of the generators inside the span
  const Mat centre = commuting_columns(alg.basis_, n, alg.generators_, tol.rank);
  const Eigen::Index zdim = centre.cols();
  std::vector<Mat> hermitian_centre;
  for (Eigen::Index k = 0; k < zdim; ++k) {
    const Mat c = unflatten(centre.col(k), n);
    hermitian_centre.push_back(c + c.adjoint());
    hermitian_centre.push_back(cplx(0, 1) * (c - c.adjoint()));
  }

  Rng rng(0x5eedULL + static_cast<std::uint64_t>(zdim * 131 + n));
  bool split = false;
  for (int attempt = 0; attempt < kMaxSplitAttempts && !split; ++attempt) {
    Mat h = Mat::Zero(n, n);
    for (const Mat& c : hermitian_centre) h += rng.normal() * c;
    const double scale = std::max(1e-300, op_norm(h));
    auto clusters = spectral_clusters(h, 1e-7 * scale);
    if (static_cast<Eigen::Index>(clusters.size()) != zdim) continue;
    alg.central_.clear();
    for (auto& c : clusters) alg.central_.push_back(std::move(c.projection));
    split = true;
  }
  if (!split) {
    throw ConvergenceError("could not split the centre into minimal projections");
  }

  std::sort(alg.central_.begin(), alg.central_.end(),
            [](const Mat& a, const Mat& b) { return projection_key(a) < projection_key(b); });

  for (const Mat& z : alg.central_) {
    double dim_block = 0.0;
    for (int i = 0; i < alg.dim(); ++i) {
      dim_block += (z * alg.basis_element(i)).squaredNorm();
    }
    const int size = static_cast<int>(std::lround(std::sqrt(dim_block)));
    const int rank = static_cast<int>(std::lround(z.trace().real()));
    if (size <= 0 || rank % size != 0 ||
        std::abs(dim_block - size * size) > 1e-6 * std::max(1.0, dim_block)) {
      throw InconsistencyError("block decomposition is not a multi-matrix structure");
    }
    alg.blocks_.push_back({rank / size, size});
  }
  return alg;
}

void Algebra::pick_generators(std::vector<Mat> generators) {
  const int n = n_;
  if (generators.empty()) {
    const int d = dim();
    if (d <= 3) {
      for (int i = 0; i < d; ++i) generators.push_back(basis_element(i));
    } else {
      // a generic element and its adjoint generate the algebra
      Rng rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(d * 7919 + n));
      Mat x = random_element(rng);
      generators.push_back(x / x.norm());
    }
  }
  generators_ = with_adjoints(generators);
  if (generators_.empty()) generators_.push_back(Mat::Identity(n, n));
}

Algebra Algebra::from_span(int ambient_dim, const std::vector<Mat>& spanning,
                           std::vector<Mat> generators, const Tolerances& tol) {
  return from_span(ambient_dim, stack_columns(spanning), std::move(generators), tol);
}

Algebra Algebra::full(int n) {
  std::vector<Mat> units;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      units.push_back(e);
    }
  }
  return from_span(n, units);
}

Algebra Algebra::scalars(int n) {
  return from_span(n, std::vector<Mat>{Mat::Identity(n, n)});
}

std::vector<Mat> Algebra::basis() const {
  std::vector<Mat> out;
  for (int i = 0; i < dim(); ++i) out.push_back(basis_element(i));
  return out;
}

Mat Algebra::project(const Mat& x) const {
  const Vec v = flatten(x);
  return unflatten(basis_ * (basis_.adjoint() * v), n_);
}

double Algebra::residual(const Mat& x) const {
  const Vec v = flatten(x);
  return (v - basis_ * (basis_.adjoint() * v)).norm();
}

bool Algebra::contains(const Mat& x, double tol) const {
  return residual(x) <= tol * std::max(1.0, x.norm());
}

bool Algebra::contains(const Algebra& other, double tol) const {
  if (other.ambient_dim() != n_) return false;
  const Mat defect = other.basis_ - basis_ * (basis_.adjoint() * other.basis_);
  return defect.norm() <= tol * std::max(1.0, std::sqrt(static_cast<double>(other.dim())));
}

Mat Algebra::random_element(Rng& rng) const {
  Vec c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = rng.complex_normal();
  return unflatten(basis_ * c, n_);
}

Mat Algebra::random_hermitian(Rng& rng) const {
  return hermitian_part(random_element(rng));
}

double Algebra::closure_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const Mat a = basis_element(i);
    worst = std::max(worst, residual(a.adjoint()));
    for (int j = 0; j < dim(); ++j) {
      worst = std::max(worst, residual(a * basis_element(j)));
    }
  }
  return worst;
}

Algebra algebra_from_generators(int ambient_dim, const std::vector<Mat>& generators,
                                const Tolerances& tol) {
  const int n = ambient_dim;
  const Eigen::Index len = static_cast<Eigen::Index>(n) * n;
  for (const Mat& g : generators) {
    if (g.rows() != n || g.cols() != n) {
      throw DomainError("generator size does not match the ambient dimension");
    }
  }
  // scaled to operator norm one so that every candidate word g x (|x| = 1)
  // has norm at most one and rounding noise can be cut with an absolute threshold
  std::vector<Mat> gens = with_adjoints(generators);
  for (Mat& g : gens) g /= op_norm(g);

  Mat q = flatten(Mat::Identity(n, n)) / std::sqrt(static_cast<double>(n));
  Eigen::Index done = 0;
  // Breadth-first saturation: every round multiplies the words found in the
  // previous round by all generators and keeps the part orthogonal to the
  // span so far. The new block is orthonormalized by a pivoted QR.
  // chunks keep the Gram eigenproblems small once most candidates are redundant
  const Eigen::Index chunk = std::max<Eigen::Index>(1, 64 / static_cast<Eigen::Index>(std::max<std::size_t>(1, gens.size())));
  while (done < q.cols() && !gens.empty()) {
    const Eigen::Index fresh = std::min(chunk, q.cols() - done);
    Mat block(len, fresh * static_cast<Eigen::Index>(gens.size()));
    for (Eigen::Index i = 0; i < fresh; ++i) {
      const Mat x = unflatten(q.col(done + i), n);
      for (std::size_t k = 0; k < gens.size(); ++k) {
        block.col(i * static_cast<Eigen::Index>(gens.size()) + static_cast<Eigen::Index>(k)) =
            flatten(gens[k] * x);
      }
    }
    done += fresh;
    block -= q * (q.adjoint() * block);
    Eigen::ColPivHouseholderQR<Mat> qr(block);
    qr.setThreshold(tol.alg / std::max(1e-300, qr.maxPivot()));
    const Eigen::Index rank = qr.rank();
    if (rank == 0) continue;
    Mat added = qr.householderQ() * Mat::Identity(len, rank);
    // second pass against the old span, then re-orthonormalize
    added -= q * (q.adjoint() * added);
    added = Eigen::HouseholderQR<Mat>(added).householderQ() * Mat::Identity(len, rank);
    if (q.cols() + added.cols() > len) {
      throw ConvergenceError("span saturation exceeded the ambient dimension");
    }
    Mat grown(len, q.cols() + added.cols());
    grown << q, added;
    q = std::move(grown);
  }
  std::vector<Mat> stored = generators;
  if (stored.empty()) stored.push_back(Mat::Identity(n, n));
  return Algebra::from_span(n, q, stored, tol);
}

std::vector<BlockUnits> matrix_units(const Algebra& alg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlockUnits> out;
  const int n = alg.ambient_dim();
  for (std::size_t b = 0; b < alg.blocks().size(); ++b) {
    const Mat& z = alg.central_projections()[b];
    const Block blk = alg.blocks()[b];
    auto zc = spectral_clusters(z, 0.5);
    const Mat vz = zc.back().range;  // eigenvalue-one eigenspace

    BlockUnits units;
    if (blk.size == 1) {
      units.column.push_back(z);
      units.range = vz;
      out.push_back(std::move(units));
      continue;
    }

    std::vector<Mat> ranges;
    for (int attempt = 0; attempt < kMaxSplitAttempts && ranges.empty(); ++attempt) {
      const Mat h = vz.adjoint() * alg.random_hermitian(rng) * vz;
      const double scale = std::max(1e-300, op_norm(h));
      auto clusters = spectral_clusters(h, 1e-8 * scale);
      if (static_cast<int>(clusters.size()) != blk.size) continue;
      bool ok = true;
      for (const auto& c : clusters) ok = ok && c.range.cols() == blk.multiplicity;
      if (!ok) continue;
      for (const auto& c : clusters) ranges.push_back(vz * c.range);
    }
    if (ranges.empty()) throw ConvergenceError("could not diagonalize an algebra block");

    const Mat f00 = ranges[0] * ranges[0].adjoint();
    units.column.push_back(f00);
    units.range = ranges[0];
    for (int i = 1; i < blk.size; ++i) {
      const Mat fii = ranges[static_cast<std::size_t>(i)] *
                      ranges[static_cast<std::size_t>(i)].adjoint();
      bool found = false;
      for (int attempt = 0; attempt < kMaxSplitAttempts && !found; ++attempt) {
        Mat x = alg.random_element(rng);
        x /= x.norm();
        const Mat v = fii * x * f00;
        const double c = v.squaredNorm() / blk.multiplicity;
        if (c < 1e-6 / (n * n)) continue;
        units.column.push_back(v / std::sqrt(c));
        found = true;
      }
      if (!found) throw ConvergenceError("could not build off-diagonal matrix units");
    }
    out.push_back(std::move(units));
  }
  return out;
}

// Block by block: x -> sum_i f_{i0} x f_{0i} maps f_00 M_n f_00 onto the
// commutant's block.
Algebra commutant_in_full(const Algebra& sub, const Tolerances& tol) {
  const int n = sub.ambient_dim();
  Mat total = Mat::Zero(n, n);
  for (const Mat& z : sub.central_projections()) total += z;
  if ((total - Mat::Identity(n, n)).norm() > 1e-8) {
    throw DomainError("commutant requires a unital subalgebra");
  }
  // The commutant of sum_b M_size ⊗ 1_mult is sum_b 1_size ⊗ M_mult: same
  // central projections, block shapes swapped, and an HS-orthonormal basis
  // read off from matrix units.
  (void)tol;
  const auto units = matrix_units(sub);
  Eigen::Index total_dim = 0;
  for (const Block& blk : sub.blocks()) total_dim += static_cast<Eigen::Index>(blk.multiplicity) * blk.multiplicity;
  Algebra out;
  out.n_ = n;
  out.basis_.resize(static_cast<Eigen::Index>(n) * n, total_dim);
  Eigen::Index col = 0;
  for (std::size_t b = 0; b < units.size(); ++b) {
    const auto& u = units[b];
    const int a = static_cast<int>(u.column.size());
    const int m = static_cast<int>(u.range.cols());
    std::vector<Mat> g;
    for (int i = 0; i < a; ++i) g.push_back(u.column[static_cast<std::size_t>(i)] * u.range);
    const double scale = 1.0 / std::sqrt(static_cast<double>(a));
    for (int l = 0; l < m; ++l) {
      for (int k = 0; k < m; ++k) {
        Mat e = Mat::Zero(n, n);
        for (const Mat& gi : g) e += gi.col(k) * gi.col(l).adjoint();
        out.basis_.col(col++) = flatten(scale * e);
      }
    }
    out.central_.push_back(sub.central_projections()[b]);
    out.blocks_.push_back({sub.blocks()[b].size, sub.blocks()[b].multiplicity});
  }
  out.pick_generators({});
  return out;
}

Algebra commutant(const Algebra& sub, const Algebra& ambient, const Tolerances& tol) {
  if (sub.ambient_dim() != ambient.ambient_dim()) {
    throw DomainError("commutant: ambient dimensions differ");
  }
  if (!ambient.contains(sub, 1e-8)) {
    throw DomainError("commutant: subalgebra is not contained in the ambient algebra");
  }
  if (ambient.is_full()) return commutant_in_full(sub, tol);
  const Mat cols = commuting_columns(ambient.basis_matrix(), ambient.ambient_dim(),
                                     sub.generators(), tol.rank);
  return Algebra::from_span(ambient.ambient_dim(), cols, {}, tol);
}

Algebra intersection(const Algebra& a, const Algebra& b, const Tolerances& tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DomainError("intersection: ambient dimensions differ");
  }
  const Mat cols = span_intersection(a.basis_matrix(), b.basis_matrix(), tol.rank);
  return Algebra::from_span(a.ambient_dim(), cols, {}, tol);
}

}  // namespace qwb
