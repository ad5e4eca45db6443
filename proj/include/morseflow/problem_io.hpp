#pragma once

// JSON problem specifications and reports. Unknown keys are rejected at every
// level; reports are byte-stable for identical inputs and toolkit version.

#include "morseflow/core_model.hpp"
#include "morseflow/nls.hpp"
#include "morseflow/routes.hpp"

#include <optional>
#include <string>

namespace morseflow {

struct NlsSpec {
  double p = 1.0;
  double omega = -1.0;
};

// Parsed spec file: a Schroedinger problem section (required by the operator
// commands), numerics overrides, and an optional nls section.
struct ProblemSpecFile {
  std::optional<SchroedingerProblem> problem;
  NumericsOptions numerics;
  std::optional<NlsSpec> nls;
  std::string source_text;  // raw JSON, echoed into reports
};

// Throws Error with a line/key diagnostic on schema violations:
// unknown keys, wrong types, invalid interval, non-positive tolerances,
// unsupported kinds.
ProblemSpecFile parse_spec_text(const std::string& json_text);
ProblemSpecFile parse_spec_file(const std::string& path);

// Serialized reports (ordered JSON; stable key order and float formatting).
std::string morse_report_json(const ProblemSpecFile& spec, const MorseReport& report);
std::string conjugate_report_json(const ProblemSpecFile& spec, const ConjugateReport& report);
std::string sweep_report_json(const ProblemSpecFile& spec, const LambdaSweepReport& report);
std::string matrix_report_json(const ProblemSpecFile& spec, const IndexLimitReport& report);
std::string nls_report_json(const NlsSpec& nls, const VerdictReport& verdict);

// CSV helpers: "%.17g" formatting so values round-trip exactly.
std::string csv_cell(double v);

}  // namespace morseflow
