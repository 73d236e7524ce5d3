#ifndef HOLOMOD_RUNNER_HPP
#define HOLOMOD_RUNNER_HPP

#include <string>
#include <vector>

#include "manifest.hpp"

namespace holomod {

struct ReportRow {
  std::string label;
  std::string suite;
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;  // zero marks an informational row
  bool pass = true;
};

struct RunReport {
  double sigma = 0.0;       // sign used for this run
  double coad_sign = 0.0;
  double sigma_residual = 0.0;
  double coad_residual = 0.0;
  unsigned seed = 0;
  std::vector<ReportRow> rows;
  double wall_seconds = 0.0;

  bool all_pass() const;
  // Deterministic CSV body: fixed header plus one row per record.
  std::string csv_body() const;
  // csv_body prefixed by a single timestamped comment line.
  std::string csv() const;
  std::string text_summary() const;
  std::string conventions_text() const;
};

// Execute the requested suites in manifest order, conventions first.
RunReport run(const Manifest& manifest);

struct ConvergenceRow {
  std::string label;
  std::vector<int> steps;
  std::vector<double> errors;  // against the finest-level reference
  double order = 0.0;          // fitted observed order
  bool exact = false;          // all errors at rounding level
};

// Step-halving study of the linearized flow on every manifest path.
std::vector<ConvergenceRow> convergence_study(const Manifest& manifest, int levels);
std::string convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace holomod

#endif
