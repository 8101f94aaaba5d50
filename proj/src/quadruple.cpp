#include "qwb/quadruple.hpp"

#include <algorithm>
#include <cmath>

#include "qwb/spectral.hpp"

namespace qwb {

namespace {

double scalar_index_of(const Expectation& e, const Tolerances& tol, const char* what) {
  const IndexData idx = watatani_index(e, tol);
  if (!idx.is_scalar()) {
    throw HypothesisError(std::string("quadruple: the index of ") + what + " is not scalar");
  }
  return *idx.scalar_index;
}

double smallest_projection_trace(const TraceState& tr, const Algebra& sub) {
  return min_projection_trace(restrict_trace(tr, std::make_shared<const Algebra>(sub)));
}

double dev(const Mat& x, const Mat& y) { return max_abs(x - y); }

}  // namespace

namespace {

Quadruple assemble(std::shared_ptr<const Tower> tower,
                   std::shared_ptr<const FourierTransform> fourier, AlgebraPtr c, AlgebraPtr d,
                   const Tolerances& tol) {
  if (!tower || tower->depth() < 1) throw DomainError("quadruple: the tower needs depth one");
  const Tower& t = *tower;
  Quadruple q;
  q.tower = tower;
  q.c = c;
  q.d = d;

  const IntermediateConstruction ic = intermediate_basic_construction(t, *c, tol);
  const IntermediateConstruction id = intermediate_basic_construction(t, *d, tol);
  q.e_c = ic.jones;
  q.e_d = id.jones;
  q.c1 = ic.dual;
  q.d1 = id.dual;

  const TraceState& tr = t.base().trace;
  q.onto_c = trace_expectation(tr, c, tol);
  q.onto_d = trace_expectation(tr, d, tol);
  const Expectation cb = trace_expectation(restrict_trace(tr, c), t.base().b, tol);
  const Expectation db = trace_expectation(restrict_trace(tr, d), t.base().b, tol);
  q.quasi_c = quasi_basis(cb, tol);
  q.quasi_d = quasi_basis(db, tol);

  QuadrupleInvariants& inv = q.inv;
  inv.index_ab = t.index();
  inv.delta = t.delta();
  inv.index_ac = scalar_index_of(q.onto_c, tol, "A over C");
  inv.index_ad = scalar_index_of(q.onto_d, tol, "A over D");
  inv.index_cb = *watatani_index(q.quasi_c, tol).scalar_index;
  inv.index_db = *watatani_index(q.quasi_d, tol).scalar_index;
  inv.r = inv.index_cb / inv.index_ad;
  inv.r_dual = inv.index_db / inv.index_ac;
  inv.tau = 1.0 / inv.index_ab;
  inv.tau_c = 1.0 / inv.index_ac;

  const Algebra b_a = fourier ? fourier->algebra(Space::BprimeA)
                               : relative_commutant(t, 0, *t.base().b, tol);
  inv.kappa_plus = smallest_projection_trace(tr, b_a);
  const TowerLevel& l1 = t.level(1);
  const Algebra a_a1 = fourier ? fourier->algebra(Space::AprimeA1)
                                : relative_commutant(t, 1, *l1.images.at(1), tol);
  inv.kappa_minus = smallest_projection_trace(l1.trace, a_a1);
  inv.kappa0 = std::sqrt(inv.kappa_plus * inv.kappa_minus);

  if (t.depth() >= 2) {
    q.fourier = fourier ? fourier : std::make_shared<const FourierTransform>(tower, tol);
    const GnsSpace& gns2 = *t.level(2).gns;
    q.e_c1 = gns2.projection_onto(*q.c1);
    q.e_d1 = gns2.projection_onto(*q.d1);
  }
  return q;
}

}  // namespace

Quadruple make_quadruple(std::shared_ptr<const Tower> tower, AlgebraPtr c, AlgebraPtr d,
                         const Tolerances& tol) {
  return assemble(std::move(tower), nullptr, std::move(c), std::move(d), tol);
}

Quadruple make_quadruple(std::shared_ptr<const FourierTransform> fourier, AlgebraPtr c,
                         AlgebraPtr d, const Tolerances& tol) {
  if (!fourier) throw DomainError("quadruple: missing Fourier transform");
  auto tower = fourier->tower_ptr();
  return assemble(std::move(tower), std::move(fourier), std::move(c), std::move(d), tol);
}

Quadruple build_quadruple(const ModelData& m, int depth, const Tolerances& tol) {
  auto tower = std::make_shared<const Tower>(build_tower(m.b, m.a, m.trace, depth, tol));
  Quadruple q = make_quadruple(tower, m.c, m.d, tol);
  q.closed = {true, m.index_ab, m.index_ac, m.index_ad, m.index_cb, m.index_db};
  return q;
}

Mat angle_operator(const Quadruple& q) { return q.e_c * q.e_d; }

namespace {

Mat aux_sum(const Quadruple& q, const std::vector<Mat>& outer, const std::vector<Mat>& inner) {
  const Tower& t = *q.tower;
  const Mat& e1 = t.level(1).jones.at(0);
  Mat total = Mat::Zero(e1.rows(), e1.cols());
  for (const Mat& g : outer) {
    const Mat lg = t.lift(g, 0, 1);
    for (const Mat& h : inner) {
      const Mat w = lg * t.lift(h, 0, 1);
      total += w * e1 * w.adjoint();
    }
  }
  return total;
}

}  // namespace

Mat aux_p(const Quadruple& q) { return aux_sum(q, q.quasi_c.elements, q.quasi_d.elements); }
Mat aux_q(const Quadruple& q) { return aux_sum(q, q.quasi_d.elements, q.quasi_c.elements); }

SquareCheck commuting_square(const Quadruple& q, double tol) {
  const Tower& t = *q.tower;
  const Algebra& a = *t.base().a;
  const Expectation& eb = t.base().expectation;
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const Mat x = a.basis_element(i);
    const Mat target = eb(x);
    worst = std::max(worst, dev(q.onto_c(q.onto_d(x)), target));
    worst = std::max(worst, dev(q.onto_d(q.onto_c(x)), target));
  }
  const Mat& e1 = t.level(1).jones.at(0);
  const double cross = std::max(dev(q.e_c * q.e_d, e1), dev(q.e_d * q.e_c, e1));
  SquareCheck s{worst <= tol, worst, cross};
  if ((worst <= tol) != (cross <= tol)) {
    // borderline values straddling the tolerance are not a contradiction
    const double lo = std::min(worst, cross);
    const double hi = std::max(worst, cross);
    if (lo <= tol / 10 || hi > tol * 10) {
      throw InconsistencyError("commuting square: expectation and projection criteria disagree");
    }
  }
  return s;
}

bool is_commuting_square(const Quadruple& q, double tol) {
  return commuting_square(q, tol).holds;
}

SquareCheck cocommuting_square(const Quadruple& q, double tol) {
  if (!q.has_dual()) throw DomainError("co-commuting square: needs a tower of depth two");
  const Mat& e2 = q.tower->level(2).jones.at(1);
  const double d = std::max(dev(q.e_c1 * q.e_d1, e2), dev(q.e_d1 * q.e_c1, e2));
  return {d <= tol, d, d};
}

bool is_cocommuting_square(const Quadruple& q, double tol) {
  return cocommuting_square(q, tol).holds;
}

Mat intersection_projection(const Quadruple& q, const Tolerances& tol) {
  const Algebra meet = intersection(*q.c, *q.d, tol);
  return q.tower->level(1).gns->projection_onto(meet);
}

Mat alternating_limit(const Quadruple& q, int max_power, double tol) {
  const Mat step = q.e_d * q.e_c * q.e_d;
  Mat x = step;
  for (int n = 2; n <= max_power; ++n) {
    Mat next = x * step;
    const double change = max_abs(next - x);
    x = std::move(next);
    if (change <= tol) break;
  }
  return x;
}

std::string hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::Unconditional: return "unconditional";
    case Hypothesis::NeedsCommuting: return "needs-commuting";
    case Hypothesis::NeedsCocommuting: return "needs-cocommuting";
    case Hypothesis::NeedsIrreducible: return "needs-irreducible";
  }
  return "unconditional";
}

Hypothesis hypothesis_from_name(const std::string& s) {
  if (s == "unconditional") return Hypothesis::Unconditional;
  if (s == "needs-commuting") return Hypothesis::NeedsCommuting;
  if (s == "needs-cocommuting") return Hypothesis::NeedsCocommuting;
  if (s == "needs-irreducible") return Hypothesis::NeedsIrreducible;
  throw DomainError("unknown hypothesis flag '" + s + "'");
}

std::string status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Pass: return "pass";
    case RowStatus::Fail: return "fail";
    case RowStatus::Info: return "info";
  }
  return "info";
}

RowStatus status_from_name(const std::string& s) {
  if (s == "pass") return RowStatus::Pass;
  if (s == "fail") return RowStatus::Fail;
  if (s == "info") return RowStatus::Info;
  throw DomainError("unknown row status '" + s + "'");
}

bool EntropyReport::passed() const {
  return std::none_of(rows.begin(), rows.end(),
                      [](const IdentityRow& r) { return r.status == RowStatus::Fail; });
}

namespace {

class RowSink {
 public:
  RowSink(std::vector<IdentityRow>& rows, bool commuting, bool cocommuting, bool irreducible)
      : rows_(rows), commuting_(commuting), cocommuting_(cocommuting), irreducible_(irreducible) {}

  void add(const std::string& name, double lhs, double rhs, double deviation, double tol,
           Hypothesis h) {
    bool asserted = true;
    if (h == Hypothesis::NeedsCommuting) asserted = commuting_;
    if (h == Hypothesis::NeedsCocommuting) asserted = cocommuting_;
    if (h == Hypothesis::NeedsIrreducible) asserted = irreducible_;
    add_gated(name, lhs, rhs, deviation, tol, h, asserted);
  }

  void add_gated(const std::string& name, double lhs, double rhs, double deviation, double tol,
                 Hypothesis h, bool asserted) {
    IdentityRow r{name, lhs, rhs, deviation, tol, h, RowStatus::Info};
    if (asserted) r.status = deviation <= tol ? RowStatus::Pass : RowStatus::Fail;
    rows_.push_back(std::move(r));
  }

  void scalar(const std::string& name, double lhs, double rhs, double tol, Hypothesis h) {
    add(name, lhs, rhs, std::abs(lhs - rhs), tol, h);
  }

 private:
  std::vector<IdentityRow>& rows_;
  bool commuting_, cocommuting_, irreducible_;
};

}  // namespace

EntropyReport verify_identities(const Quadruple& q, double tol) {
  if (!q.has_dual()) throw DomainError("verify_identities: needs a tower of depth two");
  const Tower& t = *q.tower;
  const FourierTransform& f = *q.fourier;
  const QuadrupleInvariants& inv = q.inv;
  const TowerLevel& l1 = t.level(1);
  const TowerLevel& l2 = t.level(2);
  const TraceState& tr1 = l1.trace;
  const TraceState& tr2 = l2.trace;
  const double delta = inv.delta;
  const Mat& e1 = l1.jones.at(0);
  const Mat& e2 = l2.jones.at(1);
  const auto norm1 = [&](const Mat& x) { return l2_norm(tr1, x); };
  const auto norm2 = [&](const Mat& x) { return l2_norm(tr2, x); };

  EntropyReport rep;
  rep.theta = angle_operator(q);
  rep.fourier_theta = f.forward(rep.theta);
  rep.h_theta = entropy(rep.theta, tr1, tol);
  rep.h_fourier_theta = entropy(rep.fourier_theta, tr2, tol);
  rep.tr_ec_ed = tr1(rep.theta).real();
  rep.tr_ec1_ed1 = tr2(q.e_c1 * q.e_d1).real();
  rep.p = aux_p(q);
  rep.q = aux_q(q);
  rep.is_commuting = is_commuting_square(q, tol);
  rep.is_cocommuting = is_cocommuting_square(q, tol);
  rep.is_irreducible = f.algebra(Space::BprimeA).dim() == 1;
  rep.bound = 2.0 * inv.kappa0 / delta * eta_scalar(delta / inv.kappa0 * rep.tr_ec_ed);
  rep.theorem_a_rhs = 2.0 / delta * eta_scalar(delta * rep.tr_ec_ed);
  rep.theorem_b_rhs = 2.0 / delta * eta_scalar(delta / (inv.index_ac * inv.index_ad));

  RowSink rows(rep.rows, rep.is_commuting, rep.is_cocommuting, rep.is_irreducible);
  const Hypothesis U = Hypothesis::Unconditional;
  const Hypothesis C = Hypothesis::NeedsCommuting;

  // indices
  if (q.closed.known) {
    rows.scalar("index-ab-closed-form", inv.index_ab, q.closed.index_ab, tol, U);
    rows.scalar("index-ac-closed-form", inv.index_ac, q.closed.index_ac, tol, U);
    rows.scalar("index-ad-closed-form", inv.index_ad, q.closed.index_ad, tol, U);
    rows.scalar("index-cb-closed-form", inv.index_cb, q.closed.index_cb, tol, U);
    rows.scalar("index-db-closed-form", inv.index_db, q.closed.index_db, tol, U);
  }
  rows.scalar("multiplicativity-c", inv.index_ab, inv.index_ac * inv.index_cb,
              tol * inv.index_ab, U);
  rows.scalar("multiplicativity-d", inv.index_ab, inv.index_ad * inv.index_db,
              tol * inv.index_ab, U);
  rows.scalar("r-two-ratios", inv.r, inv.r_dual, tol / 100, U);

  // transforms of Jones projections
  const Mat f_e1 = f.forward(e1);
  const Mat unit2 = Mat::Identity(e2.rows(), e2.cols()) / delta;
  rows.add("fourier-e1", norm2(f_e1), norm2(unit2), dev(f_e1, unit2), tol, U);
  const Mat f_ec = f.forward(q.e_c);
  const Mat rhs_ec = delta / inv.index_ac * q.e_c1;
  rows.add("fourier-eC", norm2(f_ec), norm2(rhs_ec), dev(f_ec, rhs_ec), tol, U);
  const Mat f_ed = f.forward(q.e_d);
  const Mat rhs_ed = delta / inv.index_ad * q.e_d1;
  rows.add("fourier-eD", norm2(f_ed), norm2(rhs_ed), dev(f_ed, rhs_ed), tol, U);

  const Expectation onto_c1 = trace_expectation(tr1, q.c1);
  const Expectation onto_d1 = trace_expectation(tr1, q.d1);
  const Mat ec1_e1 = onto_c1(e1);
  const Mat rhs_c1 = q.e_c / inv.index_cb;
  rows.add("dual-expectation-e1-C", norm1(ec1_e1), norm1(rhs_c1), dev(ec1_e1, rhs_c1), tol, U);
  const Mat ed1_e1 = onto_d1(e1);
  const Mat rhs_d1 = q.e_d / inv.index_db;
  rows.add("dual-expectation-e1-D", norm1(ed1_e1), norm1(rhs_d1), dev(ed1_e1, rhs_d1), tol, U);

  // p and q
  const Mat p_exp = inv.index_db * onto_d1(q.e_c);
  const Mat q_exp = inv.index_cb * onto_c1(q.e_d);
  rows.add("p-expectation", norm1(rep.p), norm1(p_exp), dev(rep.p, p_exp), tol, U);
  rows.add("q-expectation", norm1(rep.q), norm1(q_exp), dev(rep.q, q_exp), tol, U);
  const Mat p_conv = delta * f.convolve1(q.e_c, q.e_d);
  const Mat q_conv = delta * f.convolve1(q.e_d, q.e_c);
  rows.add("p-convolution", norm1(rep.p), norm1(p_conv), dev(rep.p, p_conv), tol, U);
  rows.add("q-convolution", norm1(rep.q), norm1(q_conv), dev(rep.q, q_conv), tol, U);
  rows.scalar("trace-p", tr1(rep.p).real(), inv.r, tol, U);
  rows.scalar("trace-q", tr1(rep.q).real(), inv.r, tol, U);
  {
    double defect_p = q.d1->residual(rep.p) / std::max(1.0, rep.p.norm());
    double defect_q = q.c1->residual(rep.q) / std::max(1.0, rep.q.norm());
    for (const Mat& g : q.c->generators()) {
      const Mat lg = t.lift(g, 0, 1);
      defect_p = std::max(defect_p, max_abs(lg * rep.p - rep.p * lg));
    }
    for (const Mat& g : q.d->generators()) {
      const Mat lg = t.lift(g, 0, 1);
      defect_q = std::max(defect_q, max_abs(lg * rep.q - rep.q * lg));
    }
    rows.add("p-membership", defect_p, 0.0, defect_p, tol, U);
    rows.add("q-membership", defect_q, 0.0, defect_q, tol, U);
  }

  // dual quadruple
  rows.scalar("trace-transfer", rep.tr_ec1_ed1, inv.index_ac / inv.index_db * rep.tr_ec_ed, tol,
              U);
  const Mat conv_dual = inv.r * f.convolve2(q.e_d1, q.e_c1);
  rows.add("fourier-theta", norm2(rep.fourier_theta), norm2(conv_dual),
           dev(rep.fourier_theta, conv_dual), tol, U);

  // entropy-uncertainty: deviation is the amount by which the bound is violated
  const double h_sum = rep.h_theta + rep.h_fourier_theta;
  rows.add("entropy-uncertainty", h_sum, rep.bound, std::max(0.0, rep.bound - h_sum), tol, U);

  // commuting squares
  const Mat abs_theta = rep.theta.adjoint() * rep.theta;
  rows.add("theta-square-e1", norm1(abs_theta), norm1(e1), dev(abs_theta, e1), tol, C);
  rows.scalar("entropy-theta-zero", rep.h_theta, 0.0, tol / 10, C);
  const double eta_tau = eta_scalar(inv.tau);
  rows.scalar("entropy-fourier-commuting", rep.h_fourier_theta, eta_tau, tol, C);
  rows.add("p-projection", norm1(rep.p), norm1(rep.p * rep.p), dev(rep.p * rep.p, rep.p), tol, C);
  rows.add("q-projection", norm1(rep.q), norm1(rep.q * rep.q), dev(rep.q * rep.q, rep.q), tol, C);
  rows.scalar("theorem-a-consistency", rep.theorem_a_rhs, eta_tau, tol, C);
  {
    // converse direction: asserted whenever the angle entropy vanishes
    const bool vanishing = std::abs(rep.h_theta) < tol / 10;
    const Mat meet = intersection_projection(q);
    rows.add_gated("intersection-projection", norm1(rep.theta), norm1(meet),
                   dev(rep.theta, meet), tol * 10, C, vanishing);
    const Mat limit = alternating_limit(q);
    rows.add_gated("intersection-limit", norm1(limit), norm1(meet), dev(limit, meet), tol * 10,
                   C, vanishing);
  }

  // co-commuting squares
  rows.scalar("theorem-b", rep.h_fourier_theta, rep.theorem_b_rhs, tol,
              Hypothesis::NeedsCocommuting);
  {
    const Mat prod = q.e_c1 * q.e_d1;
    rows.add("dual-square-e2", norm2(prod), norm2(e2), dev(prod, e2), tol,
             Hypothesis::NeedsCocommuting);
  }

  // irreducible inclusions: reported, asserted only when B'∩A is trivial
  const Hypothesis I = Hypothesis::NeedsIrreducible;
  rows.scalar("theorem-a", rep.h_fourier_theta, rep.theorem_a_rhs, tol, I);
  const double tt = inv.index_ab * rep.tr_ec_ed;
  if (tt >= tol) {
    const Mat pn = rep.p / tt;
    const Mat qn = rep.q / tt;
    rows.add("p-normalized-projection", norm1(pn), norm1(pn * pn), dev(pn * pn, pn), tol, I);
    rows.add("q-normalized-projection", norm1(qn), norm1(qn * qn), dev(qn * qn, qn), tol, I);
  } else {
    rows.add_gated("p-normalized-projection", 0.0, 0.0, 0.0, tol, I, false);
    rows.add_gated("q-normalized-projection", 0.0, 0.0, 0.0, tol, I, false);
  }
  {
    const Mat q1 = delta * f.convolve2(q.e_d1, q.e_c1);
    const Mat lhs = q1 * q1;
    const Mat rhs = inv.index_ab * rep.tr_ec1_ed1 * q1;
    rows.add("q1-square", norm2(lhs), norm2(rhs), dev(lhs, rhs), tol, I);
  }
  return rep;
}

}  // namespace qwb
