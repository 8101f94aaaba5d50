#include "qwb/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwb/report.hpp"
#include "qwb/scenario.hpp"

namespace qwb {

namespace {

using ordered = nlohmann::ordered_json;

constexpr double kDefaultTol = 1e-8;
constexpr std::uint64_t kDefaultSeed = 7;
constexpr double kMinimizeTol = 1e-6;  // agreement with a closed-form index

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Flags {
  std::string path;
  std::string tol;   // empty when not given
  std::string seed;  // empty when not given
  std::string report;
  std::string format;
  int max_order = 24;
};

double parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0)) throw UsageError(what + ": not a positive number: " + text);
  return v;
}

// --tol, then QWB_TOL, then the scenario's own tolerance, then the default
double resolve_tol(const Flags& f, const Scenario* s) {
  if (!f.tol.empty()) return parse_positive(f.tol, "--tol");
  if (const char* env = std::getenv("QWB_TOL"); env != nullptr && *env != '\0') {
    return parse_positive(env, "QWB_TOL");
  }
  if (s != nullptr && s->tolerance) return *s->tolerance;
  return kDefaultTol;
}

std::uint64_t resolve_seed(const Flags& f, const Scenario& s) {
  if (!f.seed.empty()) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(f.seed, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.seed.size() || f.seed.front() == '-') {
      throw UsageError("--seed: not a non-negative integer: " + f.seed);
    }
    return v;
  }
  return s.seed.value_or(kDefaultSeed);
}

void emit(const Flags& f, const std::string& body, std::ostream& out, const std::string& summary) {
  if (f.report.empty()) {
    out << body;
    return;
  }
  std::ofstream file(f.report, std::ios::binary);
  if (!file) throw UsageError("--report: cannot write " + f.report);
  file << body;
  if (!file) throw UsageError("--report: write failed for " + f.report);
  out << summary << "\n";
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

struct Verified {
  Scenario scenario;
  ModelData model;
  Quadruple quadruple;
  EntropyReport entropy;
  VerificationReport report;
};

Verified verify_scenario(const Flags& f) {
  Verified v;
  v.scenario = load_scenario(f.path);
  const double tol = resolve_tol(f, &v.scenario);
  const std::uint64_t seed = resolve_seed(f, v.scenario);
  v.model = build_model(v.scenario);
  v.quadruple = build_quadruple(v.model, 2);
  v.entropy = verify_identities(v.quadruple, tol);
  v.report = make_report(v.scenario.name, v.scenario.model, seed, tol, v.quadruple, v.entropy);
  return v;
}

int run_verify(const Flags& f, std::ostream& out) {
  const Verified v = verify_scenario(f);
  const std::string fmt = f.format.empty() ? "text" : f.format;
  const std::string body = fmt == "json"   ? emit_json(v.report)
                           : fmt == "csv" ? emit_csv(v.report)
                                          : emit_text(v.report);
  emit(f, body, out, v.report.scenario + ": " + (v.report.passed ? "pass" : "fail"));
  return v.report.passed ? kExitPass : kExitIdentityFailure;
}

int run_entropy(const Flags& f, std::ostream& out) {
  const Verified v = verify_scenario(f);
  const EntropySummary& s = v.report.entropy;
  const QuadrupleInvariants& inv = v.report.invariants;
  const std::vector<std::pair<std::string, double>> values{
      {"h_theta", s.h_theta},
      {"h_fourier_theta", s.h_fourier_theta},
      {"tr_ec_ed", s.tr_ec_ed},
      {"r", inv.r},
      {"kappa0", inv.kappa0},
      {"delta", inv.delta},
      {"uncertainty_bound", s.bound},
      {"theorem_a_rhs", s.theorem_a_rhs},
      {"theorem_b_rhs", s.theorem_b_rhs},
  };
  const std::string fmt = f.format.empty() ? "text" : f.format;
  std::string body;
  if (fmt == "json") {
    ordered doc;
    doc["scenario"] = v.report.scenario;
    for (const auto& [k, x] : values) doc[k] = x;
    doc["commuting"] = s.is_commuting;
    doc["cocommuting"] = s.is_cocommuting;
    doc["verdict"] = v.report.passed ? "pass" : "fail";
    body = doc.dump(2) + "\n";
  } else if (fmt == "csv") {
    std::vector<std::string> head{"scenario"}, row{v.report.scenario};
    for (const auto& [k, x] : values) {
      head.push_back(k);
      row.push_back(format12(x));
    }
    head.insert(head.end(), {"commuting", "cocommuting"});
    row.insert(row.end(), {yes(s.is_commuting), yes(s.is_cocommuting)});
    body = csv_line(head) + csv_line(row);
  } else {
    std::vector<std::vector<std::string>> table{{"scenario", v.report.scenario}};
    for (const auto& [k, x] : values) table.push_back({k, format12(x)});
    table.push_back({"commuting", yes(s.is_commuting)});
    table.push_back({"cocommuting", yes(s.is_cocommuting)});
    body = aligned(table);
  }
  emit(f, body, out, v.report.scenario + ": " + (v.report.passed ? "pass" : "fail"));
  return v.report.passed ? kExitPass : kExitIdentityFailure;
}

double row_deviation(const EntropyReport& e, const std::string& name) {
  for (const IdentityRow& r : e.rows) {
    if (r.name == name) return r.deviation;
  }
  return 0.0;
}

int run_catalog(const Flags& f, std::ostream& out) {
  const Scenario s = load_scenario(f.path);
  const double tol = resolve_tol(f, &s);
  const GroupSpec g = scenario_group(s);
  if (g.order() > f.max_order) {
    throw UsageError("catalog: group of order " + std::to_string(g.order()) +
                     " exceeds --max-order " + std::to_string(f.max_order));
  }
  const auto subs = g.subgroups();
  // one tower and Fourier transform per bottom algebra B = H∩K
  std::map<std::vector<int>, std::shared_ptr<const FourierTransform>> towers;
  const std::vector<std::string> head{
      "h_index", "k_index", "H", "K", "index_ab", "index_ac", "index_ad", "tr_ec_ed", "h_theta",
      "h_fourier_theta", "commuting", "cocommuting", "theorem_a_deviation",
      "theorem_b_deviation", "verdict"};
  std::vector<std::vector<std::string>> rows;
  bool all_passed = true;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = 0; j < subs.size(); ++j) {
      const ModelData m = group_model(g, subs[i], subs[j]);
      const std::vector<int> bottom = intersect_sorted(subs[i], subs[j]);
      auto it = towers.find(bottom);
      if (it == towers.end()) {
        auto t = std::make_shared<const Tower>(build_tower(m.b, m.a, m.trace, 2));
        it = towers.emplace(bottom, std::make_shared<const FourierTransform>(t)).first;
      }
      Quadruple q = make_quadruple(it->second, m.c, m.d);
      q.closed = {true, m.index_ab, m.index_ac, m.index_ad, m.index_cb, m.index_db};
      const EntropyReport e = verify_identities(q, tol);
      all_passed = all_passed && e.passed();
      rows.push_back({std::to_string(i), std::to_string(j), join(subs[i]), join(subs[j]),
                      format12(q.inv.index_ab), format12(q.inv.index_ac),
                      format12(q.inv.index_ad), format12(e.tr_ec_ed), format12(e.h_theta),
                      format12(e.h_fourier_theta), yes(e.is_commuting), yes(e.is_cocommuting),
                      format12(row_deviation(e, "theorem-a")),
                      format12(row_deviation(e, "theorem-b")), e.passed() ? "pass" : "fail"});
    }
  }
  const std::string fmt = f.format.empty() ? "csv" : f.format;
  std::string body;
  if (fmt == "json") {
    ordered doc;
    doc["scenario"] = s.name;
    doc["order"] = g.order();
    ordered list = ordered::array();
    for (const auto& r : rows) {
      ordered o;
      for (std::size_t c = 0; c < head.size(); ++c) o[head[c]] = r[c];
      list.push_back(o);
    }
    doc["rows"] = list;
    body = doc.dump(2) + "\n";
  } else if (fmt == "text") {
    std::vector<std::vector<std::string>> table{head};
    table.insert(table.end(), rows.begin(), rows.end());
    body = aligned(table);
  } else {
    body = csv_line(head);
    for (const auto& r : rows) body += csv_line(r);
  }
  emit(f, body, out, s.name + ": " + std::to_string(rows.size()) + " rows");
  return all_passed ? kExitPass : kExitIdentityFailure;
}

int run_minimize(const Flags& f, std::ostream& out) {
  const Scenario s = load_scenario(f.path);
  const std::uint64_t seed = resolve_seed(f, s);
  const ModelData m = build_model(s);
  const InclusionChoice inc = scenario_inclusion(s, m);
  // start from seeded random block weights on the larger algebra
  Rng rng(seed);
  const auto& blocks = inc.ambient->blocks();
  std::vector<double> w(blocks.size());
  double total = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    w[b] = 0.5 + rng.uniform();
    total += w[b] * blocks[b].size;
  }
  for (double& x : w) x /= total;
  const MinimalExpectation me =
      minimal_expectation(inc.sub, inc.ambient, TraceState(inc.ambient, w));
  const std::vector<double> values = me.index.block_values(*inc.ambient);
  const double estimate = me.index.is_scalar() ? *me.index.scalar_index
                                               : *std::max_element(values.begin(), values.end());
  const bool known = inc.closed_form > 0.0;
  const double deviation = known ? std::abs(estimate - inc.closed_form) : 0.0;
  const bool agrees = !known || deviation < kMinimizeTol;

  const std::string fmt = f.format.empty() ? "text" : f.format;
  std::string body;
  if (fmt == "json") {
    ordered doc;
    doc["scenario"] = s.name;
    doc["inclusion"] = inc.label;
    doc["seed"] = seed;
    ordered traj = ordered::array();
    for (double x : me.trajectory) traj.push_back(round12(x));
    doc["trajectory"] = traj;
    doc["iterations"] = me.iterations;
    doc["estimate"] = round12(estimate);
    if (known) {
      doc["closed_form"] = round12(inc.closed_form);
      doc["deviation"] = round12(deviation);
    }
    doc["stagnated"] = me.stagnated;
    body = doc.dump(2) + "\n";
  } else if (fmt == "csv") {
    body = csv_line({"iteration", "index"});
    for (std::size_t i = 0; i < me.trajectory.size(); ++i) {
      body += csv_line({std::to_string(i), format12(me.trajectory[i])});
    }
  } else {
    std::vector<std::vector<std::string>> table{{"iteration", "max Ind_w"}};
    for (std::size_t i = 0; i < me.trajectory.size(); ++i) {
      table.push_back({std::to_string(i), format12(me.trajectory[i])});
    }
    body = "scenario  " + s.name + " [" + inc.label + "], seed " + std::to_string(seed) + "\n\n" +
           aligned(table) + "\nestimate     " + format12(estimate) + "\n";
    if (known) {
      body += "closed form  " + format12(inc.closed_form) + "\ndeviation    " +
              format12(deviation) + "\n";
    }
    if (me.stagnated) body += "stagnated: best estimate shown\n";
  }
  emit(f, body, out, s.name + ": " + format12(estimate));
  if (me.stagnated) return kExitStagnation;
  return agrees ? kExitPass : kExitIdentityFailure;
}

std::string blocks_text(const Algebra& a) {
  std::string s;
  for (const Block& b : a.blocks()) {
    s += (s.empty() ? "" : " ") + std::to_string(b.size) + "x" + std::to_string(b.multiplicity);
  }
  return s;
}

int run_inspect(const Flags& f, std::ostream& out) {
  const Scenario s = load_scenario(f.path);
  const ModelData m = build_model(s);
  auto tower = std::make_shared<const Tower>(build_tower(m.b, m.a, m.trace, 2));
  const FourierTransform ft(tower);

  std::vector<std::vector<std::string>> algebras{{"algebra", "space", "dim", "blocks (size x mult)"}};
  for (const auto& [name, alg] : std::vector<std::pair<std::string, AlgebraPtr>>{
           {"A", m.a}, {"B", m.b}, {"C", m.c}, {"D", m.d}}) {
    algebras.push_back({name, std::to_string(alg->ambient_dim()), std::to_string(alg->dim()),
                        blocks_text(*alg)});
  }
  std::vector<std::vector<std::string>> levels{{"level", "space", "dim", "blocks (size x mult)"}};
  for (int k = 0; k <= tower->depth(); ++k) {
    const TowerLevel& l = tower->level(k);
    levels.push_back({std::to_string(k), std::to_string(l.ambient_dim),
                      std::to_string(l.algebra->dim()), blocks_text(*l.algebra)});
  }
  std::vector<std::vector<std::string>> comm{
      {"relative commutant", "space", "dim", "blocks (size x mult)"}};
  for (Space sp : {Space::BprimeA, Space::AprimeA1, Space::BprimeA1, Space::AprimeA2}) {
    const Algebra& a = ft.algebra(sp);
    comm.push_back({space_name(sp), std::to_string(a.ambient_dim()), std::to_string(a.dim()),
                    blocks_text(a)});
  }

  const std::string fmt = f.format.empty() ? "text" : f.format;
  std::string body;
  if (fmt == "text") {
    body = "scenario  " + s.name + " (" + s.model + "), index " + format12(tower->index()) +
           "\n\n" + aligned(algebras) + "\n" + aligned(levels) + "\n" + aligned(comm);
  } else if (fmt == "json") {
    auto block_list = [](const Algebra& a) {
      ordered l = ordered::array();
      for (const Block& b : a.blocks()) l.push_back({{"size", b.size}, {"multiplicity", b.multiplicity}});
      return l;
    };
    ordered doc;
    doc["scenario"] = s.name;
    doc["model"] = s.model;
    doc["index"] = round12(tower->index());
    for (const auto& [name, alg] : std::vector<std::pair<std::string, AlgebraPtr>>{
             {"A", m.a}, {"B", m.b}, {"C", m.c}, {"D", m.d}}) {
      doc["algebras"][name] = {{"space", alg->ambient_dim()}, {"dim", alg->dim()},
                               {"blocks", block_list(*alg)}};
    }
    for (int k = 0; k <= tower->depth(); ++k) {
      const TowerLevel& l = tower->level(k);
      doc["levels"].push_back({{"level", k}, {"space", l.ambient_dim}, {"dim", l.algebra->dim()},
                               {"blocks", block_list(*l.algebra)}});
    }
    for (Space sp : {Space::BprimeA, Space::AprimeA1, Space::BprimeA1, Space::AprimeA2}) {
      doc["relative_commutants"][space_name(sp)] = {{"dim", ft.algebra(sp).dim()},
                                                    {"blocks", block_list(ft.algebra(sp))}};
    }
    body = doc.dump(2) + "\n";
  } else {
    body = csv_line({"object", "space", "dim", "blocks"});
    for (std::size_t i = 1; i < algebras.size(); ++i) body += csv_line(algebras[i]);
    for (std::size_t i = 1; i < levels.size(); ++i) {
      body += csv_line({"A_" + levels[i][0], levels[i][1], levels[i][2], levels[i][3]});
    }
    for (std::size_t i = 1; i < comm.size(); ++i) body += csv_line(comm[i]);
  }
  emit(f, body, out, s.name + ": inspected");
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier transform and angle-operator entropy on finite-dimensional inclusions",
               "qwb"};
  app.require_subcommand(1);
  Flags flags;
  std::function<int(const Flags&, std::ostream&)> action;

  auto add = [&](const std::string& name, const std::string& help,
                 int (*fn)(const Flags&, std::ostream&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("scenario", flags.path, "scenario file (JSON)")->required();
    sub->add_option("--tol", flags.tol, "verification tolerance (default 1e-8, or QWB_TOL)");
    sub->add_option("--seed", flags.seed, "random seed (default 7)");
    sub->add_option("--report", flags.report, "write the report to this file");
    sub->add_option("--format", flags.format, "json, text or csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  add("verify", "build the quadruple and verify every identity", run_verify);
  add("entropy", "entropies of the angle operator and its Fourier transform", run_entropy);
  CLI::App* catalog = add("catalog", "all subgroup pairs of a group scenario", run_catalog);
  catalog->add_option("--max-order", flags.max_order, "largest group order accepted (default 24)")
      ->check(CLI::PositiveNumber);
  add("minimize-index", "minimal conditional expectation by fixed-point iteration", run_minimize);
  add("inspect", "algebra, tower and relative commutant dimensions", run_inspect);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  try {
    return action(flags, out);
  } catch (const Error& e) {
    err << "qwb: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qwb: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qwb
