#include "qwb/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qwb {

using nlohmann::json;

namespace {

// Line and column (1-based) of a byte offset.
std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      start = i + 1;
    }
  }
  return {line, static_cast<int>(offset - start) + 1};
}

std::string line_at(const std::string& text, int line) {
  std::istringstream in(text);
  std::string s;
  for (int i = 0; i < line && std::getline(in, s); ++i) {
  }
  return s;
}

std::string located(const std::string& source, const std::string& text, std::size_t offset,
                    const std::string& msg) {
  const auto [line, col] = line_col(text, offset);
  std::ostringstream out;
  out << source << ":" << line << ":" << col << ": " << msg << "\n  " << line_at(text, line);
  return out.str();
}

// Schema errors point at the first occurrence of the innermost key along a
// path of object keys, searched in order from the top of the file.
[[noreturn]] void schema_error(const Scenario& s, const std::vector<std::string>& path,
                               const std::string& msg) {
  std::size_t pos = 0;
  for (const std::string& key : path) {
    const std::size_t hit = s.text.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit;
  }
  std::string full = msg;
  if (!path.empty()) {
    std::string p;
    for (const auto& k : path) p += (p.empty() ? "" : ".") + k;
    full = p + ": " + msg;
  }
  throw ScenarioError(located(s.source, s.text, pos, full));
}

const json& require(const Scenario& s, const json& obj, const std::vector<std::string>& path) {
  const std::string& key = path.back();
  if (!obj.is_object() || !obj.contains(key)) schema_error(s, path, "missing key");
  return obj.at(key);
}

int as_int(const Scenario& s, const json& v, const std::vector<std::string>& path) {
  if (!v.is_number_integer()) schema_error(s, path, "expected an integer");
  return v.get<int>();
}

std::vector<int> int_list(const Scenario& s, const json& v, const std::vector<std::string>& path) {
  if (!v.is_array()) schema_error(s, path, "expected an array of integers");
  std::vector<int> out;
  for (const json& x : v) out.push_back(as_int(s, x, path));
  return out;
}

// [[0,1],[2,3]] cycles of one permutation
std::vector<std::vector<int>> cycles(const Scenario& s, const json& v,
                                     const std::vector<std::string>& path) {
  if (!v.is_array()) schema_error(s, path, "expected a list of cycles");
  std::vector<std::vector<int>> out;
  for (const json& c : v) out.push_back(int_list(s, c, path));
  return out;
}

Mat unitary(const Scenario& s, const json& v, std::optional<int> n,
            const std::vector<std::string>& path) {
  if (v.is_string()) {
    if (!n) schema_error(s, path, "a named unitary needs the size n");
    return named_unitary(v.get<std::string>(), *n);
  }
  if (!v.is_array() || v.empty()) {
    schema_error(s, path, "expected a name or a square array of [re, im] pairs");
  }
  const int rows = static_cast<int>(v.size());
  if (n && *n != rows) schema_error(s, path, "size does not match n");
  Mat u(rows, rows);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != rows) {
      schema_error(s, path, "matrix is not square");
    }
    for (int j = 0; j < rows; ++j) {
      const json& e = row[j];
      if (e.is_number()) {
        u(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        u(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        schema_error(s, path, "entries must be [re, im] pairs");
      }
    }
  }
  return u;
}

GroupSpec group_of(const Scenario& s) {
  const json& p = s.params;
  const int given = (p.contains("cayley") ? 1 : 0) + (p.contains("perm") ? 1 : 0) +
                    (p.contains("cyclic") ? 1 : 0);
  if (given != 1) {
    schema_error(s, {"params"}, "a group needs exactly one of \"cayley\", \"perm\", \"cyclic\"");
  }
  if (p.contains("cayley")) {
    const json& t = p.at("cayley");
    if (!t.is_array()) schema_error(s, {"params", "cayley"}, "expected a table");
    std::vector<std::vector<int>> table;
    for (const json& row : t) table.push_back(int_list(s, row, {"params", "cayley"}));
    return GroupSpec::from_cayley(table);
  }
  if (p.contains("perm")) {
    const json& g = p.at("perm");
    if (!g.is_array()) schema_error(s, {"params", "perm"}, "expected a list of generators");
    std::vector<std::vector<std::vector<int>>> gens;
    for (const json& x : g) gens.push_back(cycles(s, x, {"params", "perm"}));
    return GroupSpec::from_permutations(gens);
  }
  // "cyclic": n, or a list of orders for a direct product
  const json& c = p.at("cyclic");
  if (c.is_array()) {
    const std::vector<int> orders = int_list(s, c, {"params", "cyclic"});
    if (orders.empty()) schema_error(s, {"params", "cyclic"}, "empty product");
    GroupSpec g = GroupSpec::cyclic(orders.front());
    for (std::size_t i = 1; i < orders.size(); ++i) {
      g = GroupSpec::product(g, GroupSpec::cyclic(orders[i]));
    }
    return g;
  }
  return GroupSpec::cyclic(as_int(s, c, {"params", "cyclic"}));
}

// [0, 2] elements, {"generators": [..]} or {"perm": [[cycles], ...]}
std::vector<int> subgroup_of(const Scenario& s, const GroupSpec& g, const std::string& key) {
  const json& v = require(s, s.params, {"params", key});
  if (v.is_array()) {
    std::vector<int> h = int_list(s, v, {"params", key});
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    for (int x : h) {
      if (x < 0 || x >= g.order()) schema_error(s, {"params", key}, "element out of range");
    }
    if (!g.is_subgroup(h)) schema_error(s, {"params", key}, "not a subgroup");
    return h;
  }
  if (v.is_object() && v.contains("generators")) {
    std::vector<int> gens = int_list(s, v.at("generators"), {"params", key, "generators"});
    for (int x : gens) {
      if (x < 0 || x >= g.order()) {
        schema_error(s, {"params", key, "generators"}, "element out of range");
      }
    }
    gens.push_back(0);
    return g.closure(gens);
  }
  if (v.is_object() && v.contains("perm")) {
    const json& list = v.at("perm");
    if (!list.is_array()) schema_error(s, {"params", key, "perm"}, "expected a list");
    std::vector<int> gens{0};
    for (const json& x : list) {
      gens.push_back(g.element_of_cycles(cycles(s, x, {"params", key, "perm"})));
    }
    return g.closure(gens);
  }
  schema_error(s, {"params", key}, "expected an element list, {\"generators\": ...} or {\"perm\": ...}");
}

SubalgebraSpec subalgebra_spec(const Scenario& s, const json& v, int m, const std::string& key) {
  SubalgebraSpec spec;
  if (v.is_string()) {
    spec.kind = v.get<std::string>();
    return spec;
  }
  if (!v.is_object()) schema_error(s, {"params", key}, "expected a kind or an object");
  if (v.contains("kind")) {
    if (!v.at("kind").is_string()) schema_error(s, {"params", key, "kind"}, "expected a string");
    spec.kind = v.at("kind").get<std::string>();
  }
  if (v.contains("rotation")) {
    spec.rotation = unitary(s, v.at("rotation"), m, {"params", key, "rotation"});
  }
  return spec;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Scenario s;
  s.source = source;
  s.text = text;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    const std::size_t cut = msg.find("parse error");
    if (cut != std::string::npos) msg = msg.substr(cut);
    throw ScenarioError(located(source, text, at, msg));
  }
  if (!doc.is_object()) throw ScenarioError(located(source, text, 0, "expected a JSON object"));
  for (const auto& [key, value] : doc.items()) {
    if (key != "name" && key != "model" && key != "params" && key != "tolerance" &&
        key != "seed") {
      schema_error(s, {key}, "unknown key");
    }
  }
  const json& name = require(s, doc, {"name"});
  if (!name.is_string()) schema_error(s, {"name"}, "expected a string");
  s.name = name.get<std::string>();
  const json& model = require(s, doc, {"model"});
  if (!model.is_string()) schema_error(s, {"model"}, "expected a string");
  s.model = model.get<std::string>();
  if (s.model != "group" && s.model != "spin" && s.model != "factor") {
    schema_error(s, {"model"}, "model must be group, spin or factor");
  }
  s.params = require(s, doc, {"params"});
  if (!s.params.is_object()) schema_error(s, {"params"}, "expected an object");
  if (doc.contains("tolerance")) {
    const json& t = doc.at("tolerance");
    if (!t.is_number() || !(t.get<double>() > 0.0)) {
      schema_error(s, {"tolerance"}, "expected a positive number");
    }
    s.tolerance = t.get<double>();
  }
  if (doc.contains("seed")) {
    const json& t = doc.at("seed");
    if (!t.is_number_unsigned()) schema_error(s, {"seed"}, "expected a non-negative integer");
    s.seed = t.get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

GroupSpec scenario_group(const Scenario& s) {
  if (s.model != "group") schema_error(s, {"model"}, "expected a group scenario");
  return group_of(s);
}

ModelData build_model(const Scenario& s) {
  const json& p = s.params;
  if (s.model == "group") {
    const GroupSpec g = group_of(s);
    return group_model(g, subgroup_of(s, g, "H"), subgroup_of(s, g, "K"));
  }
  if (s.model == "spin") {
    std::optional<int> n;
    if (p.contains("n")) {
      n = as_int(s, p.at("n"), {"params", "n"});
      if (*n < 1) schema_error(s, {"params", "n"}, "n must be positive");
    }
    return spin_model(unitary(s, require(s, p, {"params", "u"}), n, {"params", "u"}));
  }
  const int k = as_int(s, require(s, p, {"params", "k"}), {"params", "k"});
  const int m = as_int(s, require(s, p, {"params", "m"}), {"params", "m"});
  const SubalgebraSpec sc = subalgebra_spec(s, require(s, p, {"params", "C"}), m, "C");
  const SubalgebraSpec sd = subalgebra_spec(s, require(s, p, {"params", "D"}), m, "D");
  return factor_model(k, m, sc, sd);
}

InclusionChoice scenario_inclusion(const Scenario& s, const ModelData& m) {
  std::string label = "A:B";
  if (s.params.contains("inclusion")) {
    if (!s.params.at("inclusion").is_string()) {
      schema_error(s, {"params", "inclusion"}, "expected a string");
    }
    label = s.params.at("inclusion").get<std::string>();
  }
  if (label == "A:B") return {label, m.b, m.a, m.index_ab};
  if (label == "A:C") return {label, m.c, m.a, m.index_ac};
  if (label == "A:D") return {label, m.d, m.a, m.index_ad};
  if (label == "C:B") return {label, m.b, m.c, m.index_cb};
  if (label == "D:B") return {label, m.b, m.d, m.index_db};
  schema_error(s, {"params", "inclusion"}, "expected one of A:B, A:C, A:D, C:B, D:B");
}

}  // namespace qwb
