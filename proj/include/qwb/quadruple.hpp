#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qwb/fourier.hpp"
#include "qwb/models.hpp"

namespace qwb {

struct QuadrupleInvariants {
  double index_ab = 0.0;
  double index_ac = 0.0;
  double index_ad = 0.0;
  double index_cb = 0.0;
  double index_db = 0.0;
  double delta = 0.0;
  double r = 0.0;          // index_cb / index_ad
  double r_dual = 0.0;     // index_db / index_ac, equal to r
  double tau = 0.0;        // 1 / index_ab
  double tau_c = 0.0;      // 1 / index_ac
  double kappa_plus = 0.0;   // smallest projection trace in B'∩A
  double kappa_minus = 0.0;  // smallest projection trace in A'∩A_1
  double kappa0 = 0.0;

  bool operator==(const QuadrupleInvariants&) const = default;
};

/// Indices known in closed form from a model family.
struct ClosedForms {
  bool known = false;
  double index_ab = 0.0;
  double index_ac = 0.0;
  double index_ad = 0.0;
  double index_cb = 0.0;
  double index_db = 0.0;
};

/// (B ⊂ C, D ⊂ A) on a tower of depth one or two. The level-two data
/// (dual projections and the Fourier transform) is present only when the
/// tower has depth two.
struct Quadruple {
  std::shared_ptr<const Tower> tower;
  std::shared_ptr<const FourierTransform> fourier;  // null at depth one
  AlgebraPtr c, d;
  Mat e_c, e_d;      // level 1
  AlgebraPtr c1, d1; // level 1
  Mat e_c1, e_d1;    // level 2, empty at depth one
  QuasiBasis quasi_c, quasi_d;  // of E^C_B and E^D_B
  Expectation onto_c, onto_d;   // tr-preserving A -> C, A -> D
  QuadrupleInvariants inv;
  ClosedForms closed;

  bool has_dual() const { return fourier != nullptr; }
};

/// Builds the quadruple data for B ⊆ C, D ⊆ A. Indices of the intermediate
/// inclusions come from the trace-preserving expectations of the tower trace
/// and must be scalar.
Quadruple make_quadruple(std::shared_ptr<const Tower> tower, AlgebraPtr c, AlgebraPtr d,
                         const Tolerances& tol = {});
/// Same, reusing a Fourier transform already built on the tower.
Quadruple make_quadruple(std::shared_ptr<const FourierTransform> fourier, AlgebraPtr c,
                         AlgebraPtr d, const Tolerances& tol = {});

/// Tower of the requested depth for the model's B ⊂ A, then make_quadruple.
Quadruple build_quadruple(const ModelData& m, int depth = 2, const Tolerances& tol = {});

/// Theta = e_C e_D on the level-one space.
Mat angle_operator(const Quadruple& q);

/// p(C,D) = sum_ij g_i d_j e_1 d_j^* g_i^* and q(C,D) with the roles swapped.
Mat aux_p(const Quadruple& q);
Mat aux_q(const Quadruple& q);

struct SquareCheck {
  bool holds = false;
  double defect = 0.0;        // expectation composition defect
  double cross_defect = 0.0;  // projection identity defect
};

/// E_C E_D = E_D E_C = E_B on A, cross-checked against e_C e_D = e_D e_C = e_1.
/// Throws InconsistencyError when the two criteria disagree.
SquareCheck commuting_square(const Quadruple& q, double tol);
bool is_commuting_square(const Quadruple& q, double tol = 1e-8);

/// e_{C_1} e_{D_1} = e_{D_1} e_{C_1} = e_2 (needs depth two).
SquareCheck cocommuting_square(const Quadruple& q, double tol);
bool is_cocommuting_square(const Quadruple& q, double tol = 1e-8);

/// Projection onto L^2(C∩D) built from the span intersection, and the
/// alternating-projection limit (e_D e_C e_D)^n for comparison.
Mat intersection_projection(const Quadruple& q, const Tolerances& tol = {});
Mat alternating_limit(const Quadruple& q, int max_power = 200, double tol = 1e-12);

enum class Hypothesis { Unconditional, NeedsCommuting, NeedsCocommuting, NeedsIrreducible };
std::string hypothesis_name(Hypothesis h);
Hypothesis hypothesis_from_name(const std::string& s);

enum class RowStatus { Pass, Fail, Info };
std::string status_name(RowStatus s);
RowStatus status_from_name(const std::string& s);

struct IdentityRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  Hypothesis hypothesis = Hypothesis::Unconditional;
  RowStatus status = RowStatus::Info;

  bool operator==(const IdentityRow&) const = default;
};

struct EntropyReport {
  Mat theta;
  Mat fourier_theta;
  double h_theta = 0.0;
  double h_fourier_theta = 0.0;
  double tr_ec_ed = 0.0;
  double tr_ec1_ed1 = 0.0;
  Mat p, q;
  bool is_commuting = false;
  bool is_cocommuting = false;
  bool is_irreducible = false;
  double bound = 0.0;            // entropy-uncertainty lower bound
  double theorem_a_rhs = 0.0;    // (2/delta) eta(delta tr(e_C e_D))
  double theorem_b_rhs = 0.0;    // (2/delta) eta(delta / ([A:C][A:D]))
  std::vector<IdentityRow> rows;

  /// True iff no asserted row failed.
  bool passed() const;
};

/// Evaluates every identity on a depth-two quadruple. Rows whose hypothesis
/// does not hold in the model are reported with status Info.
EntropyReport verify_identities(const Quadruple& q, double tol = 1e-8);

}  // namespace qwb
