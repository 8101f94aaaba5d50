#include "qwb/models.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

namespace qwb {

namespace {

constexpr int kMaxPermutationGroup = 10000;

using Perm = std::vector<int>;

Perm compose(const Perm& g, const Perm& h) {
  Perm out(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) out[x] = g[static_cast<std::size_t>(h[x])];
  return out;
}

Perm from_cycles(const std::vector<std::vector<int>>& cycles, int degree) {
  Perm p(static_cast<std::size_t>(degree));
  for (int x = 0; x < degree; ++x) p[static_cast<std::size_t>(x)] = x;
  std::set<int> seen;
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (cycle[i] < 0) throw DomainError("permutation: negative point");
      if (!seen.insert(cycle[i]).second) {
        throw DomainError("permutation: point repeated in cycles of one generator");
      }
      p[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    }
  }
  return p;
}

Algebra span_algebra(int n, const std::vector<Mat>& span, double tol) {
  Tolerances t;
  t.num = tol;
  return Algebra::from_span(n, span, {}, t);
}

}  // namespace

GroupSpec GroupSpec::from_cayley(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw DomainError("group: empty Cayley table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw DomainError("group: Cayley table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) throw DomainError("group: Cayley table entry out of range");
    }
  }
  for (int g = 0; g < n; ++g) {
    if (table[0][g] != g || table[g][0] != g) {
      throw DomainError("group: element 0 is not the identity");
    }
    std::vector<char> row_seen(n, 0), col_seen(n, 0);
    for (int h = 0; h < n; ++h) {
      row_seen[table[g][h]] = 1;
      col_seen[table[h][g]] = 1;
    }
    if (std::count(row_seen.begin(), row_seen.end(), 1) != n ||
        std::count(col_seen.begin(), col_seen.end(), 1) != n) {
      throw DomainError("group: Cayley table is not a Latin square");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw DomainError("group: multiplication is not associative");
        }
      }
    }
  }
  GroupSpec g;
  g.table_ = std::move(table);
  g.inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (g.table_[a][b] == 0) g.inverse_[static_cast<std::size_t>(a)] = b;
    }
  }
  return g;
}

GroupSpec GroupSpec::from_permutations(
    const std::vector<std::vector<std::vector<int>>>& generators) {
  int degree = 1;
  for (const auto& gen : generators) {
    for (const auto& cycle : gen) {
      for (int x : cycle) degree = std::max(degree, x + 1);
    }
  }
  std::vector<Perm> gens;
  for (const auto& gen : generators) gens.push_back(from_cycles(gen, degree));

  Perm id(static_cast<std::size_t>(degree));
  for (int x = 0; x < degree; ++x) id[static_cast<std::size_t>(x)] = x;
  std::vector<Perm> elements{id};
  std::map<Perm, int> index{{id, 0}};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const Perm& s : gens) {
      Perm p = compose(s, elements[i]);
      if (index.count(p)) continue;
      if (static_cast<int>(elements.size()) >= kMaxPermutationGroup) {
        throw DomainError("group: permutation group is too large");
      }
      index.emplace(p, static_cast<int>(elements.size()));
      elements.push_back(std::move(p));
    }
  }
  const std::size_t n = elements.size();
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));
  }
  GroupSpec g = from_cayley(std::move(table));
  g.permutations_ = std::move(elements);
  return g;
}

int GroupSpec::element_of_cycles(const std::vector<std::vector<int>>& cycles) const {
  if (permutations_.empty()) throw DomainError("group: not given by permutations");
  const int degree = static_cast<int>(permutations_.front().size());
  for (const auto& cycle : cycles) {
    for (int x : cycle) {
      if (x >= degree) throw DomainError("permutation: point outside the permuted set");
    }
  }
  const Perm p = from_cycles(cycles, degree);
  const auto it = std::find(permutations_.begin(), permutations_.end(), p);
  if (it == permutations_.end()) throw DomainError("permutation: not an element of the group");
  return static_cast<int>(it - permutations_.begin());
}

GroupSpec GroupSpec::cyclic(int n) {
  if (n < 1) throw DomainError("group: cyclic order must be positive");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return from_cayley(std::move(t));
}

GroupSpec GroupSpec::product(const GroupSpec& x, const GroupSpec& y) {
  const int nx = x.order(), ny = y.order();
  std::vector<std::vector<int>> t(static_cast<std::size_t>(nx * ny), std::vector<int>(nx * ny));
  for (int a = 0; a < nx * ny; ++a) {
    for (int b = 0; b < nx * ny; ++b) {
      t[a][b] = x.mul(a / ny, b / ny) * ny + y.mul(a % ny, b % ny);
    }
  }
  return from_cayley(std::move(t));
}

bool GroupSpec::is_subgroup(const std::vector<int>& elements) const {
  if (elements.empty() || !std::binary_search(elements.begin(), elements.end(), 0)) return false;
  for (int v : elements) {
    if (v < 0 || v >= order()) return false;
  }
  for (int a : elements) {
    for (int b : elements) {
      if (!std::binary_search(elements.begin(), elements.end(), mul(a, b))) return false;
    }
  }
  return true;
}

std::vector<int> GroupSpec::closure(const std::vector<int>& elements) const {
  std::vector<char> in(static_cast<std::size_t>(order()), 0);
  std::vector<int> list{0};
  in[0] = 1;
  for (int v : elements) {
    if (v < 0 || v >= order()) throw DomainError("group: element index out of range");
    if (!in[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      list.push_back(v);
    }
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (int p : {mul(list[i], list[j]), mul(list[j], list[i])}) {
        if (!in[static_cast<std::size_t>(p)]) {
          in[static_cast<std::size_t>(p)] = 1;
          list.push_back(p);
        }
      }
    }
  }
  std::sort(list.begin(), list.end());
  return list;
}

std::vector<std::vector<int>> GroupSpec::subgroups() const {
  std::set<std::vector<int>> found;
  std::vector<std::vector<int>> cyclic;
  for (int g = 0; g < order(); ++g) {
    auto c = closure({g});
    if (found.insert(c).second) cyclic.push_back(c);
  }
  // every subgroup is a join of cyclic subgroups
  std::deque<std::vector<int>> pending(found.begin(), found.end());
  while (!pending.empty()) {
    const std::vector<int> s = pending.front();
    pending.pop_front();
    for (const auto& c : cyclic) {
      std::vector<int> u = s;
      u.insert(u.end(), c.begin(), c.end());
      auto j = closure(u);
      if (found.insert(j).second) pending.push_back(std::move(j));
    }
  }
  std::vector<std::vector<int>> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Mat left_regular(const GroupSpec& g, int element) {
  const int n = g.order();
  Mat m = Mat::Zero(n, n);
  for (int h = 0; h < n; ++h) m(g.mul(element, h), h) = 1.0;
  return m;
}

Algebra group_subalgebra(const GroupSpec& g, const std::vector<int>& h) {
  if (!g.is_subgroup(h)) throw DomainError("group: subset is not a subgroup");
  std::vector<Mat> span;
  for (int x : h) span.push_back(left_regular(g, x));
  return Algebra::from_span(g.order(), span, span);
}

ModelData group_model(const GroupSpec& g, const std::vector<int>& h, const std::vector<int>& k) {
  std::vector<int> hs = h, ks = k;
  std::sort(hs.begin(), hs.end());
  std::sort(ks.begin(), ks.end());
  ModelData m;
  m.family = "group";
  std::vector<int> all(static_cast<std::size_t>(g.order()));
  for (int i = 0; i < g.order(); ++i) all[static_cast<std::size_t>(i)] = i;
  const std::vector<int> hk = intersect_sorted(hs, ks);
  m.a = std::make_shared<const Algebra>(group_subalgebra(g, all));
  m.b = std::make_shared<const Algebra>(group_subalgebra(g, hk));
  m.c = std::make_shared<const Algebra>(group_subalgebra(g, hs));
  m.d = std::make_shared<const Algebra>(group_subalgebra(g, ks));
  m.trace = TraceState::normalized_ambient(m.a);
  const double n = g.order();
  m.index_ab = n / static_cast<double>(hk.size());
  m.index_ac = n / static_cast<double>(hs.size());
  m.index_ad = n / static_cast<double>(ks.size());
  m.index_cb = static_cast<double>(hs.size()) / static_cast<double>(hk.size());
  m.index_db = static_cast<double>(ks.size()) / static_cast<double>(hk.size());
  return m;
}

bool is_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm() < tol;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ModelData spin_model(const Mat& u, double tol) {
  if (!is_unitary(u, tol)) throw DomainError("spin model: u is not unitary");
  const int n = static_cast<int>(u.rows());
  if (n < 2) throw DomainError("spin model: n must be at least 2");
  ModelData m;
  m.family = "spin";
  m.a = std::make_shared<const Algebra>(Algebra::full(n));
  m.b = std::make_shared<const Algebra>(Algebra::scalars(n));
  std::vector<Mat> diag, rotated;
  for (int i = 0; i < n; ++i) {
    Mat p = Mat::Zero(n, n);
    p(i, i) = 1.0;
    diag.push_back(p);
    rotated.push_back(u * p * u.adjoint());
  }
  m.c = std::make_shared<const Algebra>(span_algebra(n, diag, tol));
  m.d = std::make_shared<const Algebra>(span_algebra(n, rotated, tol));
  m.trace = TraceState::normalized_ambient(m.a);
  m.index_ab = static_cast<double>(n) * n;
  m.index_ac = m.index_ad = m.index_cb = m.index_db = n;
  return m;
}

Algebra subalgebra_of_matrices(int m, const SubalgebraSpec& s, double tol) {
  const Mat u = s.rotation.size() == 0 ? Mat::Identity(m, m) : s.rotation;
  if (u.rows() != m || !is_unitary(u, tol)) {
    throw DomainError("factor model: subalgebra rotation is not an m x m unitary");
  }
  std::vector<Mat> span;
  if (s.kind == "diagonal") {
    for (int i = 0; i < m; ++i) {
      Mat p = Mat::Zero(m, m);
      p(i, i) = 1.0;
      span.push_back(u * p * u.adjoint());
    }
  } else if (s.kind == "full") {
    return Algebra::full(m);
  } else if (s.kind == "scalars") {
    return Algebra::scalars(m);
  } else {
    throw DomainError("factor model: unknown subalgebra kind '" + s.kind + "'");
  }
  return span_algebra(m, span, tol);
}

double subalgebra_index(int m, const SubalgebraSpec& s) {
  if (s.kind == "diagonal") return m;
  if (s.kind == "full") return static_cast<double>(m) * m;
  return 1.0;
}

ModelData factor_model(int k, int m, const SubalgebraSpec& sc, const SubalgebraSpec& sd,
                       double tol) {
  if (k < 1 || m < 2) throw DomainError("factor model: need k >= 1 and m >= 2");
  const Algebra s_c = subalgebra_of_matrices(m, sc, tol);
  const Algebra s_d = subalgebra_of_matrices(m, sd, tol);
  const int n = k * m;
  auto tensor = [&](const Algebra& s) {
    std::vector<Mat> span;
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        Mat e = Mat::Zero(k, k);
        e(i, j) = 1.0;
        for (int t = 0; t < s.dim(); ++t) span.push_back(kron(e, s.basis_element(t)));
      }
    }
    return span_algebra(n, span, tol);
  };
  ModelData md;
  md.family = "factor";
  md.a = std::make_shared<const Algebra>(Algebra::full(n));
  md.b = std::make_shared<const Algebra>(tensor(Algebra::scalars(m)));
  md.c = std::make_shared<const Algebra>(tensor(s_c));
  md.d = std::make_shared<const Algebra>(tensor(s_d));
  md.trace = TraceState::normalized_ambient(md.a);
  md.index_ab = static_cast<double>(m) * m;
  md.index_cb = subalgebra_index(m, sc);
  md.index_db = subalgebra_index(m, sd);
  md.index_ac = md.index_ab / md.index_cb;
  md.index_ad = md.index_ab / md.index_db;
  return md;
}

bool hadamard_profile(const Mat& u, double tol) {
  const double target = 1.0 / std::sqrt(static_cast<double>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (std::abs(std::abs(u(i, j)) - target) > tol) return false;
    }
  }
  return true;
}

Mat named_unitary(const std::string& name, int n) {
  if (n < 1) throw DomainError("unitary: size must be positive");
  if (name == "identity") return Mat::Identity(n, n);
  if (name == "hadamard2") {
    if (n != 2) throw DomainError("unitary: hadamard2 needs n = 2");
    Mat h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
  }
  if (name == "fourier") {
    Mat f(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                             2.0 * std::numbers::pi * j * k / n);
      }
    }
    return f;
  }
  const std::string prefix = "rotation:";
  if (name.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double theta = 0.0;
    try {
      theta = std::stod(name.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw DomainError("unitary: cannot read the angle in '" + name + "'");
    }
    if (used != name.size() - prefix.size()) {
      throw DomainError("unitary: cannot read the angle in '" + name + "'");
    }
    if (n < 2) throw DomainError("unitary: rotation needs n >= 2");
    Mat r = Mat::Identity(n, n);
    r(0, 0) = std::cos(theta);
    r(0, 1) = -std::sin(theta);
    r(1, 0) = std::sin(theta);
    r(1, 1) = std::cos(theta);
    return r;
  }
  throw DomainError("unitary: unknown name '" + name + "'");
}

}  // namespace qwb
