#pragma once

// Verification experiments for the weighted spectral inequalities and the
// suite runner behind `wlspec verify`.

#include <string>
#include <utility>
#include <vector>

#include "wlspec/mesh.hpp"
#include "wlspec/weights.hpp"

namespace wlspec {

enum class Theorem {
  FaberKrahn,
  FaberKrahnHemisphere,
  HongKrahnSzego,
  SzegoWeinberger,
  AppendixOrdering,
};

// faber_krahn | faber_krahn_hemisphere | hong_krahn_szego | szego_weinberger
// | appendix_ordering
const char* to_string(Theorem t);
Theorem parse_theorem(const std::string& s);

struct ExperimentSpec {
  Theorem theorem = Theorem::FaberKrahn;
  int kappa = 0;
  int dim = 2;
  std::string weight = "zero";  // "name[:param]"
  std::string shape;            // ShapeSpec text; unused by appendix_ordering
  double mesh_h = 0.0;          // 0: shape scale / 30
  int num_levels = 256;
  double tolerance = 0.02;
  std::vector<double> radii;    // appendix_ordering grid; empty: default per kappa

  // Canonical identity used for ordering reports.
  std::string identity() const;
};

enum class Status { Pass, Fail, Inconclusive };
const char* to_string(Status s);

struct HypothesisCheck {
  bool pass = true;
  std::string required;  // class description
  std::string detail;
};

struct InequalityReport {
  ExperimentSpec spec;
  std::string weight_label;
  std::string shape_label;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // signed, normalised by rhs; positive when the inequality holds
  HypothesisCheck hypothesis;
  Status status = Status::Inconclusive;
  long runtime_ms = 0;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::pair<std::string, std::string>> notes;

  double diagnostic(const std::string& key) const;  // NaN when absent
};

// Throws Error(Config) when the theorem, geometry, weight or shape are
// incompatible or the numeric fields are out of range.
void validate(const ExperimentSpec& spec);

// Class the weight must satisfy for the given theorem and curvature.
// Faber-Krahn in the plane accepts either alternative.
std::vector<AdmissibilityClass> required_classes(Theorem theorem, int kappa, int dim);

InequalityReport run_faber_krahn(const ExperimentSpec& spec);
InequalityReport run_faber_krahn_hemisphere(const ExperimentSpec& spec);
InequalityReport run_hks(const ExperimentSpec& spec);
InequalityReport run_szego_weinberger(const ExperimentSpec& spec);
InequalityReport run_appendix_ordering(const ExperimentSpec& spec);
InequalityReport run_experiment(const ExperimentSpec& spec);

// Default mesh size for a shape: a thirtieth of its length scale.
double default_mesh_h(const ShapeSpec& shape, const SpaceFormModel& model);

// JSON config: {"experiments": [{...}, ...]}. Errors carry the line or the
// offending field path.
std::vector<ExperimentSpec> parse_config(const std::string& json_text);

std::string summary_csv(const std::vector<InequalityReport>& reports);
std::string report_json(const std::vector<InequalityReport>& reports);

// 0 all Pass (or nothing run), 2 any Fail, 3 Inconclusive without Fail.
int exit_code_for(const std::vector<InequalityReport>& reports);

struct SuiteOutcome {
  int exit_code = 0;  // 1 for an unreadable or malformed config
  std::vector<InequalityReport> reports;  // sorted by spec identity
  std::string error;
};

// Runs every experiment of the config and writes report.json and
// summary.csv into out_dir (created if missing).
SuiteOutcome run_suite(const std::string& config_path, const std::string& out_dir);

}  // namespace wlspec
