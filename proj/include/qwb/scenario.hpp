#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "qwb/models.hpp"

namespace qwb {

/// A scenario file that does not match the schema. what() carries the
/// source name, line and column and a copy of the offending line.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  std::string name;
  std::string model;       // group, spin or factor
  nlohmann::json params;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::string source;      // file name for diagnostics
  std::string text;        // raw file contents for diagnostics
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<input>");
Scenario load_scenario(const std::string& path);

/// Builds the model. Schema violations are ScenarioError with line context;
/// mathematical rejections (non-unitary u, H not a subgroup, ...) keep their
/// own error types.
ModelData build_model(const Scenario& s);

/// The group of a group scenario, for the catalog.
GroupSpec scenario_group(const Scenario& s);

/// Which inclusion of the quadruple minimize-index works on: params key
/// "inclusion", one of "A:B" (default), "A:C", "A:D", "C:B", "D:B".
struct InclusionChoice {
  std::string label;
  AlgebraPtr sub, ambient;
  double closed_form = 0.0;  // 0 when unknown
};
InclusionChoice scenario_inclusion(const Scenario& s, const ModelData& m);

}  // namespace qwb
