#pragma once

#include <string>
#include <vector>

#include "qwb/algebra.hpp"
#include "qwb/trace.hpp"

namespace qwb {

/// A finite group as a Cayley table; element 0 is the identity and
/// table[g][h] is the index of g*h.
class GroupSpec {
 public:
  /// Validates the table (identity at 0, Latin square, associativity).
  static GroupSpec from_cayley(std::vector<std::vector<int>> table);
  /// Closure of permutation generators given in cycle notation. Elements are
  /// numbered in breadth-first order from the identity; (gh)(x) = g(h(x)).
  static GroupSpec from_permutations(const std::vector<std::vector<std::vector<int>>>& generators);
  static GroupSpec cyclic(int n);
  static GroupSpec product(const GroupSpec& a, const GroupSpec& b);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int g, int h) const { return table_[g][h]; }
  int inverse(int g) const { return inverse_[g]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  /// True when the sorted index list is a subgroup.
  bool is_subgroup(const std::vector<int>& elements) const;
  /// Smallest subgroup containing the elements, sorted.
  std::vector<int> closure(const std::vector<int>& elements) const;
  /// All subgroups, ordered by order and then lexicographically.
  std::vector<std::vector<int>> subgroups() const;

  /// Index of the element given in cycle notation (permutation groups only).
  int element_of_cycles(const std::vector<std::vector<int>>& cycles) const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> permutations_;  // empty unless built from permutations
};

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b);

/// The data every model hands to the quadruple builder: B ⊆ C, D ⊆ A on a
/// common space with a Markov trace on A, plus closed-form indices.
struct ModelData {
  std::string family;
  AlgebraPtr b, c, d, a;
  TraceState trace;
  double index_ab = 0.0;
  double index_ac = 0.0;
  double index_ad = 0.0;
  double index_cb = 0.0;
  double index_db = 0.0;
};

/// Left regular representation g -> lambda(g) on C^|G|.
Mat left_regular(const GroupSpec& g, int element);
/// The image of C[H] under the left regular representation.
Algebra group_subalgebra(const GroupSpec& g, const std::vector<int>& h);

/// A = C[G], B = C[H∩K], C = C[H], D = C[K] with the canonical trace.
ModelData group_model(const GroupSpec& g, const std::vector<int>& h, const std::vector<int>& k);

/// A = M_n, B = C, C = diagonal, D = u (diagonal) u^*, normalized trace.
ModelData spin_model(const Mat& u, double tol = 1e-8);

/// A *-subalgebra S of M_m used by the factor model: `kind` is "diagonal",
/// "full" or "scalars", conjugated by `rotation` (identity when empty).
struct SubalgebraSpec {
  std::string kind = "diagonal";
  Mat rotation;
};
Algebra subalgebra_of_matrices(int m, const SubalgebraSpec& s, double tol = 1e-8);
double subalgebra_index(int m, const SubalgebraSpec& s);

/// A = M_k ⊗ M_m, B = M_k ⊗ 1, C = M_k ⊗ S_C, D = M_k ⊗ S_D.
ModelData factor_model(int k, int m, const SubalgebraSpec& sc, const SubalgebraSpec& sd,
                       double tol = 1e-8);

/// All entries of u have modulus 1 / sqrt(n).
bool hadamard_profile(const Mat& u, double tol = 1e-8);

/// "hadamard2", "fourier", "identity" or "rotation:<radians>" at size n.
Mat named_unitary(const std::string& name, int n);

bool is_unitary(const Mat& u, double tol);
Mat kron(const Mat& a, const Mat& b);

}  // namespace qwb
