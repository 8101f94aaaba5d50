#include "qwb/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qwb {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format12(x).c_str(), nullptr);
}

std::string format12(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

VerificationReport make_report(const std::string& scenario, const std::string& model,
                               std::uint64_t seed, double tolerance, const Quadruple& q,
                               const EntropyReport& e) {
  VerificationReport r;
  r.scenario = scenario;
  r.model = model;
  r.seed = seed;
  r.tolerance = round12(tolerance);
  QuadrupleInvariants& v = r.invariants;
  v = q.inv;
  for (double* x : {&v.index_ab, &v.index_ac, &v.index_ad, &v.index_cb, &v.index_db, &v.delta,
                    &v.r, &v.r_dual, &v.tau, &v.tau_c, &v.kappa_plus, &v.kappa_minus,
                    &v.kappa0}) {
    *x = round12(*x);
  }
  EntropySummary& s = r.entropy;
  s.h_theta = round12(e.h_theta);
  s.h_fourier_theta = round12(e.h_fourier_theta);
  s.tr_ec_ed = round12(e.tr_ec_ed);
  s.tr_ec1_ed1 = round12(e.tr_ec1_ed1);
  s.bound = round12(e.bound);
  s.theorem_a_rhs = round12(e.theorem_a_rhs);
  s.theorem_b_rhs = round12(e.theorem_b_rhs);
  s.is_commuting = e.is_commuting;
  s.is_cocommuting = e.is_cocommuting;
  s.is_irreducible = e.is_irreducible;
  for (IdentityRow row : e.rows) {
    row.lhs = round12(row.lhs);
    row.rhs = round12(row.rhs);
    row.deviation = round12(row.deviation);
    row.tolerance = round12(row.tolerance);
    r.rows.push_back(row);
  }
  if (!e.is_irreducible) {
    r.notes.push_back(
        "B'∩A is not trivial, so rows needing irreducibility are informational: an "
        "irreducible proper inclusion does not exist in finite dimensions");
  }
  if (!e.is_commuting) {
    r.notes.push_back("not a commuting square: rows needing one are informational");
  }
  if (!e.is_cocommuting) {
    r.notes.push_back("not a co-commuting square: rows needing one are informational");
  }
  r.passed = e.passed();
  return r;
}

namespace {

ordered number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DomainError("report: not a number: " + s);
  }
  return v.get<double>();
}

}  // namespace

std::string emit_json(const VerificationReport& r) {
  ordered doc;
  doc["scenario"] = r.scenario;
  doc["model"] = r.model;
  doc["seed"] = r.seed;
  doc["tolerance"] = number(r.tolerance);
  const QuadrupleInvariants& v = r.invariants;
  ordered inv;
  inv["index_ab"] = number(v.index_ab);
  inv["index_ac"] = number(v.index_ac);
  inv["index_ad"] = number(v.index_ad);
  inv["index_cb"] = number(v.index_cb);
  inv["index_db"] = number(v.index_db);
  inv["delta"] = number(v.delta);
  inv["r"] = number(v.r);
  inv["r_dual"] = number(v.r_dual);
  inv["tau"] = number(v.tau);
  inv["tau_c"] = number(v.tau_c);
  inv["kappa_plus"] = number(v.kappa_plus);
  inv["kappa_minus"] = number(v.kappa_minus);
  inv["kappa0"] = number(v.kappa0);
  doc["invariants"] = inv;
  const EntropySummary& s = r.entropy;
  ordered ent;
  ent["h_theta"] = number(s.h_theta);
  ent["h_fourier_theta"] = number(s.h_fourier_theta);
  ent["tr_ec_ed"] = number(s.tr_ec_ed);
  ent["tr_ec1_ed1"] = number(s.tr_ec1_ed1);
  ent["bound"] = number(s.bound);
  ent["theorem_a_rhs"] = number(s.theorem_a_rhs);
  ent["theorem_b_rhs"] = number(s.theorem_b_rhs);
  ent["commuting"] = s.is_commuting;
  ent["cocommuting"] = s.is_cocommuting;
  ent["irreducible"] = s.is_irreducible;
  doc["entropy"] = ent;
  ordered rows = ordered::array();
  for (const IdentityRow& row : r.rows) {
    ordered o;
    o["name"] = row.name;
    o["lhs"] = number(row.lhs);
    o["rhs"] = number(row.rhs);
    o["deviation"] = number(row.deviation);
    o["tolerance"] = number(row.tolerance);
    o["hypothesis"] = hypothesis_name(row.hypothesis);
    o["status"] = status_name(row.status);
    rows.push_back(o);
  }
  doc["identities"] = rows;
  doc["notes"] = r.notes;
  doc["verdict"] = r.passed ? "pass" : "fail";
  return doc.dump(2) + "\n";
}

VerificationReport parse_report_json(const std::string& text) {
  const json doc = json::parse(text);
  VerificationReport r;
  r.scenario = doc.at("scenario").get<std::string>();
  r.model = doc.at("model").get<std::string>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.tolerance = read_number(doc.at("tolerance"));
  const json& inv = doc.at("invariants");
  QuadrupleInvariants& v = r.invariants;
  v.index_ab = read_number(inv.at("index_ab"));
  v.index_ac = read_number(inv.at("index_ac"));
  v.index_ad = read_number(inv.at("index_ad"));
  v.index_cb = read_number(inv.at("index_cb"));
  v.index_db = read_number(inv.at("index_db"));
  v.delta = read_number(inv.at("delta"));
  v.r = read_number(inv.at("r"));
  v.r_dual = read_number(inv.at("r_dual"));
  v.tau = read_number(inv.at("tau"));
  v.tau_c = read_number(inv.at("tau_c"));
  v.kappa_plus = read_number(inv.at("kappa_plus"));
  v.kappa_minus = read_number(inv.at("kappa_minus"));
  v.kappa0 = read_number(inv.at("kappa0"));
  const json& ent = doc.at("entropy");
  EntropySummary& s = r.entropy;
  s.h_theta = read_number(ent.at("h_theta"));
  s.h_fourier_theta = read_number(ent.at("h_fourier_theta"));
  s.tr_ec_ed = read_number(ent.at("tr_ec_ed"));
  s.tr_ec1_ed1 = read_number(ent.at("tr_ec1_ed1"));
  s.bound = read_number(ent.at("bound"));
  s.theorem_a_rhs = read_number(ent.at("theorem_a_rhs"));
  s.theorem_b_rhs = read_number(ent.at("theorem_b_rhs"));
  s.is_commuting = ent.at("commuting").get<bool>();
  s.is_cocommuting = ent.at("cocommuting").get<bool>();
  s.is_irreducible = ent.at("irreducible").get<bool>();
  for (const json& o : doc.at("identities")) {
    IdentityRow row;
    row.name = o.at("name").get<std::string>();
    row.lhs = read_number(o.at("lhs"));
    row.rhs = read_number(o.at("rhs"));
    row.deviation = read_number(o.at("deviation"));
    row.tolerance = read_number(o.at("tolerance"));
    row.hypothesis = hypothesis_from_name(o.at("hypothesis").get<std::string>());
    row.status = status_from_name(o.at("status").get<std::string>());
    r.rows.push_back(row);
  }
  r.notes = doc.at("notes").get<std::vector<std::string>>();
  const std::string verdict = doc.at("verdict").get<std::string>();
  if (verdict != "pass" && verdict != "fail") throw DomainError("report: bad verdict " + verdict);
  r.passed = verdict == "pass";
  return r;
}

std::string aligned(const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    if (row.size() > width.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << line << "\n";
  }
  return out.str();
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& c = cells[i];
    if (i > 0) out += ',';
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  return out + "\n";
}

std::string emit_text(const VerificationReport& r) {
  std::ostringstream out;
  const QuadrupleInvariants& v = r.invariants;
  const EntropySummary& s = r.entropy;
  out << "scenario  " << r.scenario << " (" << r.model << ", seed " << r.seed << ", tol "
      << format12(r.tolerance) << ")\n\n";
  out << aligned({
      {"[A:B]", format12(v.index_ab), "[A:C]", format12(v.index_ac), "[A:D]",
       format12(v.index_ad)},
      {"[C:B]", format12(v.index_cb), "[D:B]", format12(v.index_db), "delta", format12(v.delta)},
      {"r", format12(v.r), "r'", format12(v.r_dual), "kappa0", format12(v.kappa0)},
      {"kappa+", format12(v.kappa_plus), "kappa-", format12(v.kappa_minus), "tau",
       format12(v.tau)},
  });
  out << "\n";
  auto yes = [](bool b) { return std::string(b ? "yes" : "no"); };
  out << aligned({
      {"H(|Theta|^2)", format12(s.h_theta)},
      {"H(|F(Theta)|^2)", format12(s.h_fourier_theta)},
      {"tr(e_C e_D)", format12(s.tr_ec_ed)},
      {"tr(e_C1 e_D1)", format12(s.tr_ec1_ed1)},
      {"uncertainty bound", format12(s.bound)},
      {"theorem A rhs", format12(s.theorem_a_rhs)},
      {"theorem B rhs", format12(s.theorem_b_rhs)},
      {"commuting", yes(s.is_commuting)},
      {"co-commuting", yes(s.is_cocommuting)},
      {"irreducible", yes(s.is_irreducible)},
  });
  out << "\n";
  std::vector<std::vector<std::string>> table{
      {"identity", "lhs", "rhs", "deviation", "tolerance", "hypothesis", "status"}};
  for (const IdentityRow& row : r.rows) {
    table.push_back({row.name, format12(row.lhs), format12(row.rhs), format12(row.deviation),
                     format12(row.tolerance), hypothesis_name(row.hypothesis),
                     status_name(row.status)});
  }
  out << aligned(table);
  for (const std::string& n : r.notes) out << "\nnote: " << n;
  if (!r.notes.empty()) out << "\n";
  out << "\nverdict  " << (r.passed ? "pass" : "fail") << "\n";
  return out.str();
}

std::string emit_csv(const VerificationReport& r) {
  std::string out = csv_line(
      {"scenario", "identity", "lhs", "rhs", "deviation", "tolerance", "hypothesis", "status"});
  for (const IdentityRow& row : r.rows) {
    out += csv_line({r.scenario, row.name, format12(row.lhs), format12(row.rhs),
                     format12(row.deviation), format12(row.tolerance),
                     hypothesis_name(row.hypothesis), status_name(row.status)});
  }
  return out;
}

}  // namespace qwb
