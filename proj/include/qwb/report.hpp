#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwb/quadruple.hpp"

namespace qwb {

/// Scalar part of an EntropyReport (operators are not serialized).
struct EntropySummary {
  double h_theta = 0.0;
  double h_fourier_theta = 0.0;
  double tr_ec_ed = 0.0;
  double tr_ec1_ed1 = 0.0;
  double bound = 0.0;
  double theorem_a_rhs = 0.0;
  double theorem_b_rhs = 0.0;
  bool is_commuting = false;
  bool is_cocommuting = false;
  bool is_irreducible = false;

  bool operator==(const EntropySummary&) const = default;
};

struct VerificationReport {
  std::string scenario;
  std::string model;
  std::uint64_t seed = 7;
  double tolerance = 1e-8;
  QuadrupleInvariants invariants;
  EntropySummary entropy;
  std::vector<IdentityRow> rows;
  std::vector<std::string> notes;
  bool passed = false;

  bool operator==(const VerificationReport&) const = default;
};

/// Nearest double to the 12-significant-digit decimal of x. Reports store
/// rounded values so that emitting and parsing is exact.
double round12(double x);
/// printf("%.12g") of x.
std::string format12(double x);

/// Snapshot of a verified quadruple, every real rounded by round12.
VerificationReport make_report(const std::string& scenario, const std::string& model,
                               std::uint64_t seed, double tolerance, const Quadruple& q,
                               const EntropyReport& e);

std::string emit_json(const VerificationReport& r);
VerificationReport parse_report_json(const std::string& text);
std::string emit_text(const VerificationReport& r);
/// The identity table as CSV.
std::string emit_csv(const VerificationReport& r);

/// Left-aligned columns separated by two spaces.
std::string aligned(const std::vector<std::vector<std::string>>& table);
/// RFC 4180 quoting where needed.
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace qwb
