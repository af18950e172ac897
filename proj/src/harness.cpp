#include "wlspec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wlspec/error.hpp"
#include "wlspec/fem.hpp"
#include "wlspec/measure.hpp"
#include "wlspec/radial.hpp"
#include "wlspec/rearrange.hpp"

namespace wlspec {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

bool is_zero_weight(const WeightProfile& p) { return p.label() == "zero"; }

struct Setup {
  SpaceFormModel model;
  WeightProfile profile;
  ShapeSpec shape;
  TriMesh mesh;
  double h = 0.0;
};

Setup make_setup(const ExperimentSpec& spec) {
  Setup s{SpaceFormModel(curvature_from_int(spec.kappa), spec.dim), parse_profile(spec.weight),
          ShapeSpec::parse(spec.shape), {}, 0.0};
  s.h = spec.mesh_h > 0.0 ? spec.mesh_h : default_mesh_h(s.shape, s.model);
  s.mesh = generate_mesh(s.shape, s.h, s.model);
  return s;
}

double max_distance(const TriMesh& mesh, const SpaceFormModel& model, ConformalPoint from) {
  double d = 0.0;
  for (const auto& v : mesh.vertices) d = std::max(d, model.geodesic_distance(from, v));
  return d;
}

HypothesisCheck check_classes(const WeightProfile& profile, const std::vector<AdmissibilityClass>& classes,
                              double t_max) {
  HypothesisCheck h;
  h.pass = false;
  t_max = std::min(t_max, profile.domain_sup());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    h.required += (i ? " or " : "") + classes[i].describe();
    const AdmissibilityVerdict v = check_admissibility(profile, classes[i], 2000, t_max);
    if (v.pass) {
      h.pass = true;
      h.detail = "satisfies " + classes[i].describe() + " on [0, " + num(t_max) + "]";
      return h;
    }
    h.detail += (h.detail.empty() ? "" : "; ") + v.detail;
  }
  return h;
}

InequalityReport start_report(const ExperimentSpec& spec) {
  InequalityReport r;
  r.spec = spec;
  r.weight_label = parse_profile(spec.weight).label();
  r.shape_label = spec.shape.empty() ? "ball" : ShapeSpec::parse(spec.shape).describe();
  return r;
}

// Status from the hypothesis verdict, the margin and any extra failed checks.
void settle(InequalityReport& r, bool equality_case, const std::vector<std::string>& failed_checks) {
  const double tol = r.spec.tolerance;
  if (!r.hypothesis.pass) {
    r.status = Status::Inconclusive;
  } else if (!(r.margin >= -tol)) {
    r.status = Status::Fail;
    r.notes.emplace_back("failure", "margin below -tolerance");
  } else if (equality_case && !(std::abs(r.margin) <= tol)) {
    r.status = Status::Fail;
    r.notes.emplace_back("failure", "equality case not sharp within tolerance");
  } else if (!failed_checks.empty()) {
    r.status = Status::Fail;
    for (const auto& c : failed_checks) r.notes.emplace_back("failure", c);
  } else {
    r.status = Status::Pass;
  }
  if (equality_case) r.notes.emplace_back("equality_case", "true");
}

template <class F>
InequalityReport timed(const ExperimentSpec& spec, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  InequalityReport r = start_report(spec);
  try {
    body(r);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    r.status = Status::Inconclusive;
    r.notes.emplace_back("error", e.what());
  }
  r.runtime_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - t0)
                                       .count());
  return r;
}

// Rearrangement of |u| on the matched ball: the discrete counterpart of the
// symmetrization step behind the Dirichlet comparisons.
void symmetrization_checks(InequalityReport& r, const TriMesh& mesh, const SpaceFormModel& model,
                           const WeightProfile& profile, const std::vector<double>& u,
                           std::vector<std::string>& failed) {
  FemField f{&mesh, u};
  for (double& x : f.nodal_values) x = std::abs(x);
  const int levels = r.spec.num_levels;
  const RadialRearrangement rr = rearrange(f, model, profile, levels);
  const double l2 = l2_identity_residual(f, rr, model, profile);
  const EnergyComparison ec = energy_comparison(f, rr, model, profile);
  const double eq = equimeasurability_error(f, rr, model, profile);
  r.diagnostics.emplace_back("l2_identity_residual", l2);
  r.diagnostics.emplace_back("energy_domain", ec.energy_domain);
  r.diagnostics.emplace_back("energy_ball", ec.energy_ball);
  r.diagnostics.emplace_back("equimeasurability_error", eq);
  if (!(l2 <= 2.0 / levels + 1e-8)) failed.push_back("L2 identity residual above 2/num_levels");
  if (!(ec.energy_ball <= ec.energy_domain * (1.0 + r.spec.tolerance)))
    failed.push_back("rearranged energy exceeds the domain energy");
  if (!(eq <= 2.0 / levels)) failed.push_back("superlevel volumes not equimeasurable");
}

void add_fem_diagnostics(InequalityReport& r, const TriMesh& mesh, double h, const SpectrumResult& sp) {
  r.diagnostics.emplace_back("mesh_h", h);
  r.diagnostics.emplace_back("mesh_vertices", static_cast<double>(mesh.num_vertices()));
  r.diagnostics.emplace_back("fem_iterations", sp.iterations);
  r.diagnostics.emplace_back("fem_max_residual", *std::max_element(sp.residuals.begin(), sp.residuals.end()));
}

// Within a degenerate lowest pair, take the component along the constant
// function first so the second field splits the pair symmetrically.
void split_degenerate_pair(SpectrumResult& sp, const FemSystem& sys) {
  if (sp.eigenvalues.size() < 2) return;
  if (std::abs(sp.eigenvalues[1] - sp.eigenvalues[0]) > 1e-6 * std::abs(sp.eigenvalues[1])) return;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(sys.mass.rows());
  const Eigen::VectorXd m1 = sys.mass * one;
  auto vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  };
  double c1 = vec(sp.eigenfields[0]).dot(m1), c2 = vec(sp.eigenfields[1]).dot(m1);
  const double n = std::hypot(c1, c2);
  if (n == 0.0) return;
  c1 /= n;
  c2 /= n;
  const Eigen::VectorXd a = c1 * vec(sp.eigenfields[0]) + c2 * vec(sp.eigenfields[1]);
  const Eigen::VectorXd b = -c2 * vec(sp.eigenfields[0]) + c1 * vec(sp.eigenfields[1]);
  sp.eigenfields[0].assign(a.data(), a.data() + a.size());
  sp.eigenfields[1].assign(b.data(), b.data() + b.size());
}

InequalityReport dirichlet_first(const ExperimentSpec& spec) {
  return timed(spec, [&](InequalityReport& r) {
    Setup s = make_setup(spec);
    const double volume = mesh_weighted_volume(s.mesh, s.model, s.profile);
    const double R = solve_radius(s.model, s.profile, volume);
    r.hypothesis = check_classes(s.profile, required_classes(spec.theorem, spec.kappa, spec.dim),
                                 std::max(R, max_distance(s.mesh, s.model, {})));
    const FemSystem sys = assemble(s.mesh, WeightField{s.model, s.profile, {}}, BoundaryCondition::Dirichlet);
    const SpectrumResult sp = solve_spectrum(sys, 2);
    const RadialSolver solver(s.model, s.profile);
    r.lhs = sp.eigenvalues[0];
    r.rhs = solver.first_dirichlet(R);
    r.margin = (r.lhs - r.rhs) / r.rhs;
    r.diagnostics.emplace_back("weighted_volume", volume);
    r.diagnostics.emplace_back("matched_radius", R);
    add_fem_diagnostics(r, s.mesh, s.h, sp);
    std::vector<std::string> failed;
    symmetrization_checks(r, s.mesh, s.model, s.profile, sp.eigenfields[0], failed);
    settle(r, s.shape.is_centered_ball(), failed);
  });
}

std::vector<double> default_radii(int kappa) {
  if (kappa == 1) return {0.4, 0.8, 1.2};
  return {0.5, 1.0, 2.0};
}

}  // namespace

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::FaberKrahn: return "faber_krahn";
    case Theorem::FaberKrahnHemisphere: return "faber_krahn_hemisphere";
    case Theorem::HongKrahnSzego: return "hong_krahn_szego";
    case Theorem::SzegoWeinberger: return "szego_weinberger";
    case Theorem::AppendixOrdering: return "appendix_ordering";
  }
  return "?";
}

Theorem parse_theorem(const std::string& s) {
  for (Theorem t : {Theorem::FaberKrahn, Theorem::FaberKrahnHemisphere, Theorem::HongKrahnSzego,
                    Theorem::SzegoWeinberger, Theorem::AppendixOrdering})
    if (s == to_string(t)) return t;
  fail(ErrorCode::Config, "unknown theorem '" + s + "'");
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "Pass";
    case Status::Fail: return "Fail";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string ExperimentSpec::identity() const {
  std::string id = std::string(to_string(theorem)) + "|" + std::to_string(kappa) + "|" + std::to_string(dim) +
                   "|" + parse_profile(weight).label() + "|" +
                   (shape.empty() ? "ball" : ShapeSpec::parse(shape).describe()) + "|" + num(mesh_h) + "|" +
                   std::to_string(num_levels) + "|" + num(tolerance);
  for (double r : radii) id += "|" + num(r);
  return id;
}

double InequalityReport::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<AdmissibilityClass> required_classes(Theorem theorem, int kappa, int dim) {
  using A = Admissibility;
  switch (theorem) {
    case Theorem::FaberKrahn:
      if (kappa == 0) return {AdmissibilityClass({A::Concave}, dim), AdmissibilityClass({A::NonIncreasing, A::BbmpConvexity}, dim)};
      return {AdmissibilityClass({A::StrictlyConcave}, dim)};
    case Theorem::HongKrahnSzego:
      if (kappa == 0) return {AdmissibilityClass({A::Concave}, dim)};
      return {AdmissibilityClass({A::StrictlyConcave}, dim)};
    case Theorem::FaberKrahnHemisphere:
      return {AdmissibilityClass({A::LogCosHemisphere}, dim)};
    case Theorem::SzegoWeinberger:
    case Theorem::AppendixOrdering:
      return {AdmissibilityClass({A::NonIncreasing, A::Convex}, dim)};
  }
  return {};
}

void validate(const ExperimentSpec& spec) {
  auto bad = [](const std::string& msg) { fail(ErrorCode::Config, msg); };
  if (spec.kappa < -1 || spec.kappa > 1) bad("kappa must be -1, 0 or 1");
  if (spec.dim < 2) bad("dim must be at least 2");
  if (!(spec.tolerance > 0.0)) bad("tolerance must be positive");
  if (spec.num_levels < 32) bad("num_levels must be at least 32");
  if (spec.mesh_h < 0.0) bad("mesh_h must be positive");
  WeightProfile profile = [&] {
    try {
      return parse_profile(spec.weight);
    } catch (const Error& e) {
      fail(ErrorCode::Config, std::string("weight: ") + e.what());
    }
  }();
  const bool log_cos = profile.label().rfind("log_cos", 0) == 0;

  if (spec.theorem == Theorem::AppendixOrdering) {
    if (!spec.shape.empty()) bad("appendix_ordering works on balls; omit shape");
    for (double r : spec.radii)
      if (!(r > 0.0)) bad("radii must be positive");
    const double limit = std::min(SpaceFormModel(curvature_from_int(spec.kappa), spec.dim).max_radius(),
                                  profile.domain_sup());
    for (double r : spec.radii.empty() ? default_radii(spec.kappa) : spec.radii)
      if (!(r < limit)) bad("radius " + num(r) + " outside the admissible range");
    return;
  }
  if (spec.dim != 2) bad("domain experiments are two-dimensional");
  if (spec.shape.empty()) bad("shape is required");
  ShapeSpec shape;
  try {
    shape = ShapeSpec::parse(spec.shape);
  } catch (const Error& e) {
    fail(ErrorCode::Config, std::string("shape: ") + e.what());
  }
  switch (spec.theorem) {
    case Theorem::FaberKrahnHemisphere:
      if (spec.kappa != 1) bad("the hemisphere experiment needs kappa = 1");
      if (!log_cos) bad("the hemisphere experiment needs the log_cos weight");
      if (shape.kind != ShapeKind::GeodesicCap) bad("the hemisphere experiment accepts geodesic caps only");
      break;
    case Theorem::FaberKrahn:
    case Theorem::HongKrahnSzego:
    case Theorem::SzegoWeinberger:
      if (spec.kappa == 1) bad(std::string(to_string(spec.theorem)) + " needs kappa 0 or -1");
      if (shape.kind == ShapeKind::GeodesicCap) bad("geodesic caps belong to the hemisphere experiment");
      break;
    case Theorem::AppendixOrdering: break;
  }
  // A coarse triangulation catches shapes that leave the model.
  const SpaceFormModel model(curvature_from_int(spec.kappa), 2);
  try {
    generate_mesh(shape, 4.0 * default_mesh_h(shape, model), model);
  } catch (const Error& e) {
    fail(ErrorCode::Config, std::string("shape: ") + e.what());
  }
}

double default_mesh_h(const ShapeSpec& shape, const SpaceFormModel& model) {
  double scale = 1.0;
  switch (shape.kind) {
    case ShapeKind::Disk:
    case ShapeKind::Dumbbell:
    case ShapeKind::TwoDisjointDisks: scale = shape.radius; break;
    case ShapeKind::Ellipse: scale = std::sqrt(shape.a * shape.b); break;
    case ShapeKind::Rectangle: scale = std::sqrt(shape.width * shape.height / std::numbers::pi); break;
    case ShapeKind::GeodesicCap:
      scale = geodesic_disk_in_model(model, shape.center_distance, shape.radius).radius;
      break;
    case ShapeKind::Polygon: {
      double a = 0.0;
      const auto& p = shape.polygon;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& q = p[(i + 1) % p.size()];
        a += p[i].x * q.y - q.x * p[i].y;
      }
      scale = std::sqrt(std::abs(a) / 2.0 / std::numbers::pi);
      break;
    }
  }
  return scale / 30.0;
}

InequalityReport run_faber_krahn(const ExperimentSpec& spec) {
  if (spec.theorem != Theorem::FaberKrahn) fail(ErrorCode::Config, "not a faber_krahn experiment");
  validate(spec);
  return dirichlet_first(spec);
}

InequalityReport run_faber_krahn_hemisphere(const ExperimentSpec& spec) {
  if (spec.theorem != Theorem::FaberKrahnHemisphere)
    fail(ErrorCode::Config, "not a faber_krahn_hemisphere experiment");
  validate(spec);
  return dirichlet_first(spec);
}

InequalityReport run_hks(const ExperimentSpec& spec) {
  if (spec.theorem != Theorem::HongKrahnSzego) fail(ErrorCode::Config, "not a hong_krahn_szego experiment");
  validate(spec);
  return timed(spec, [&](InequalityReport& r) {
    Setup s = make_setup(spec);
    const double volume = mesh_weighted_volume(s.mesh, s.model, s.profile);
    const double half_R = solve_radius(s.model, s.profile, volume / 2.0);
    r.hypothesis = check_classes(s.profile, required_classes(spec.theorem, spec.kappa, spec.dim),
                                 std::max(half_R, max_distance(s.mesh, s.model, {})));
    const FemSystem sys = assemble(s.mesh, WeightField{s.model, s.profile, {}}, BoundaryCondition::Dirichlet);
    SpectrumResult sp = solve_spectrum(sys, 3);
    split_degenerate_pair(sp, sys);
    const RadialSolver solver(s.model, s.profile);
    r.lhs = sp.eigenvalues[1];
    r.rhs = solver.first_dirichlet(half_R);
    r.margin = (r.lhs - r.rhs) / r.rhs;
    const int nodal = nodal_domain_count(s.mesh, sp.eigenfields[1]);
    r.diagnostics.emplace_back("weighted_volume", volume);
    r.diagnostics.emplace_back("half_volume_radius", half_R);
    r.diagnostics.emplace_back("lambda_1", sp.eigenvalues[0]);
    r.diagnostics.emplace_back("nodal_domains", nodal);
    add_fem_diagnostics(r, s.mesh, s.h, sp);
    std::vector<std::string> failed;
    if (nodal != 2) failed.push_back("second eigenfield does not have two nodal domains");
    settle(r, s.shape.kind == ShapeKind::TwoDisjointDisks && is_zero_weight(s.profile), failed);
  });
}

InequalityReport run_szego_weinberger(const ExperimentSpec& spec) {
  if (spec.theorem != Theorem::SzegoWeinberger) fail(ErrorCode::Config, "not a szego_weinberger experiment");
  validate(spec);
  return timed(spec, [&](InequalityReport& r) {
    Setup s = make_setup(spec);
    const RadialSolver solver(s.model, s.profile);
    const RadialMode dipole{1, 1, BoundaryCondition::Neumann};
    auto matched_radius = [&](ConformalPoint c) {
      return solve_radius(s.model, s.profile, mesh_weighted_volume(s.mesh, WeightField{s.model, s.profile, c}));
    };
    const TrialProvider trial = [&](ConformalPoint c) { return solver.eigenpair(dipole, matched_radius(c)); };
    const RecenterResult rec = recenter_for_zero_mean(s.mesh, s.model, s.profile, trial);
    r.diagnostics.emplace_back("shift_x", rec.shift.x);
    r.diagnostics.emplace_back("shift_y", rec.shift.y);
    r.diagnostics.emplace_back("moment_norm", rec.moment_norm);
    r.diagnostics.emplace_back("moment_threshold", rec.threshold);
    r.diagnostics.emplace_back("recenter_iterations", rec.iterations);
    if (!rec.converged) {
      r.hypothesis = {false, "recentering", rec.failure};
      r.status = Status::Inconclusive;
      r.notes.emplace_back("recentering", rec.failure);
      return;
    }
    const ConformalPoint o = rec.shift;
    const WeightField field{s.model, s.profile, o};
    const double volume = mesh_weighted_volume(s.mesh, field);
    const double R = solve_radius(s.model, s.profile, volume);
    const double t_max = std::max(R, max_distance(s.mesh, s.model, o));
    r.hypothesis = check_classes(s.profile, required_classes(spec.theorem, spec.kappa, spec.dim), t_max);

    // The comparison of the trial function with the ball eigenfunction needs
    // h non-decreasing and h'^2 + (n-1) h^2 / S^2 non-increasing.
    const RadialEigenpair pair = solver.eigenpair(dipole, R);
    const TrialMonotonicity mono = check_trial_monotonicity(pair, s.model, t_max, 4000);
    r.diagnostics.emplace_back("trial_worst_h_drop", mono.worst_h_drop);
    r.diagnostics.emplace_back("trial_worst_q_rise", mono.worst_q_rise);
    if (r.hypothesis.pass && !(mono.h_non_decreasing && mono.q_non_increasing)) {
      r.hypothesis.pass = false;
      r.hypothesis.detail = "trial function monotonicity fails";
    }

    const FemSystem sys = assemble(s.mesh, field, BoundaryCondition::Neumann);
    const SpectrumResult sp = solve_spectrum(sys, 3);
    r.lhs = sp.eigenvalues[1];
    r.rhs = solver.first_neumann(R).first_nonzero;
    r.margin = (r.rhs - r.lhs) / r.rhs;

    double num_sum = 0.0, den_sum = 0.0;
    for (int c = 0; c < 2; ++c) {
      const auto f = interpolate_trial(s.mesh, s.model, pair, o, c);
      const Eigen::Map<const Eigen::VectorXd> v(f.data(), static_cast<Eigen::Index>(f.size()));
      num_sum += v.dot(sys.stiffness * v);
      den_sum += v.dot(sys.mass * v);
    }
    r.diagnostics.emplace_back("weighted_volume", volume);
    r.diagnostics.emplace_back("matched_radius", R);
    r.diagnostics.emplace_back("trial_rayleigh_quotient", num_sum / den_sum);
    add_fem_diagnostics(r, s.mesh, s.h, sp);
    settle(r, s.shape.is_centered_ball(), {});
  });
}

InequalityReport run_appendix_ordering(const ExperimentSpec& spec) {
  if (spec.theorem != Theorem::AppendixOrdering) fail(ErrorCode::Config, "not an appendix_ordering experiment");
  validate(spec);
  return timed(spec, [&](InequalityReport& r) {
    const SpaceFormModel model(curvature_from_int(spec.kappa), spec.dim);
    const WeightProfile profile = parse_profile(spec.weight);
    const std::vector<double> radii = spec.radii.empty() ? default_radii(spec.kappa) : spec.radii;
    r.hypothesis = check_classes(profile, required_classes(spec.theorem, spec.kappa, spec.dim),
                                 *std::max_element(radii.begin(), radii.end()));
    const RadialSolver solver(model, profile);
    std::vector<std::string> failed;
    double worst_wronskian = 0.0;
    r.margin = std::numeric_limits<double>::infinity();
    for (double R : radii) {
      const RadialEigenpair dip = solver.eigenpair({1, 1, BoundaryCondition::Neumann}, R);
      const RadialEigenpair rad = solver.eigenpair({0, 2, BoundaryCondition::Neumann}, R);
      const double m = (rad.eigenvalue - dip.eigenvalue) / rad.eigenvalue;
      if (m < r.margin) {
        r.margin = m;
        r.lhs = dip.eigenvalue;
        r.rhs = rad.eigenvalue;
      }
      const double w = solver.wronskian_residual(dip, rad, R);
      worst_wronskian = std::max(worst_wronskian, w);
      r.diagnostics.emplace_back("mu_1_1@" + num(R), dip.eigenvalue);
      r.diagnostics.emplace_back("mu_0_2@" + num(R), rad.eigenvalue);
      if (dip.node_count != 0 || rad.node_count != 1)
        failed.push_back("node count mismatch at R=" + num(R));
    }
    r.diagnostics.emplace_back("worst_wronskian_residual", worst_wronskian);
    if (!(worst_wronskian <= 1e-6)) failed.push_back("Wronskian identity residual above 1e-6");
    if (!(r.margin > 0.0)) failed.push_back("ordering mu_1_1 < mu_0_2 violated");
    settle(r, false, failed);
  });
}

InequalityReport run_experiment(const ExperimentSpec& spec) {
  switch (spec.theorem) {
    case Theorem::FaberKrahn: return run_faber_krahn(spec);
    case Theorem::FaberKrahnHemisphere: return run_faber_krahn_hemisphere(spec);
    case Theorem::HongKrahnSzego: return run_hks(spec);
    case Theorem::SzegoWeinberger: return run_szego_weinberger(spec);
    case Theorem::AppendixOrdering: return run_appendix_ordering(spec);
  }
  fail(ErrorCode::Config, "unknown theorem");
}

// ---------------------------------------------------------------------------
// Config and reports

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ExperimentSpec parse_experiment(const Json& j, const std::string& where) {
  auto bad = [&](const std::string& field, const std::string& msg) {
    fail(ErrorCode::Config, where + (field.empty() ? "" : "." + field) + ": " + msg);
  };
  if (!j.is_object()) bad("", "expected an object");
  ExperimentSpec e;
  bool have_theorem = false, have_kappa = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "theorem") {
      if (!v.is_string()) bad(key, "expected a string");
      try {
        e.theorem = parse_theorem(v.get<std::string>());
      } catch (const Error& err) {
        bad(key, err.what());
      }
      have_theorem = true;
    } else if (key == "kappa") {
      if (!v.is_number_integer()) bad(key, "expected an integer");
      e.kappa = v.get<int>();
      have_kappa = true;
    } else if (key == "dim") {
      if (!v.is_number_integer()) bad(key, "expected an integer");
      e.dim = v.get<int>();
    } else if (key == "weight") {
      if (!v.is_string()) bad(key, "expected a string");
      e.weight = v.get<std::string>();
    } else if (key == "shape") {
      if (!v.is_string()) bad(key, "expected a string");
      e.shape = v.get<std::string>();
    } else if (key == "mesh_h") {
      if (!v.is_number() || !(v.get<double>() > 0.0)) bad(key, "expected a positive number");
      e.mesh_h = v.get<double>();
    } else if (key == "num_levels") {
      if (!v.is_number_integer()) bad(key, "expected an integer");
      e.num_levels = v.get<int>();
    } else if (key == "tolerance") {
      if (!v.is_number()) bad(key, "expected a number");
      e.tolerance = v.get<double>();
    } else if (key == "radii") {
      if (!v.is_array()) bad(key, "expected an array of numbers");
      for (const auto& x : v) {
        if (!x.is_number()) bad(key, "expected an array of numbers");
        e.radii.push_back(x.get<double>());
      }
    } else if (key != "comment") {
      bad(key, "unknown field");
    }
  }
  if (!have_theorem) bad("theorem", "missing");
  if (!have_kappa) bad("kappa", "missing");
  try {
    validate(e);
  } catch (const Error& err) {
    bad("", err.what());
  }
  return e;
}

}  // namespace

std::vector<ExperimentSpec> parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Config, "config is not valid JSON at " + line_of(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!root.is_object()) fail(ErrorCode::Config, "config root must be an object");
  Json defaults = Json::object();
  std::vector<ExperimentSpec> out;
  for (const auto& [key, v] : root.items())
    if (key != "experiments" && key != "defaults" && key != "comment")
      fail(ErrorCode::Config, key + ": unknown field");
  if (root.contains("defaults")) {
    defaults = root["defaults"];
    if (!defaults.is_object()) fail(ErrorCode::Config, "defaults: expected an object");
  }
  if (!root.contains("experiments")) fail(ErrorCode::Config, "experiments: missing");
  const Json& list = root["experiments"];
  if (!list.is_array()) fail(ErrorCode::Config, "experiments: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Json merged = defaults;
    if (list[i].is_object())
      for (const auto& [k, v] : list[i].items()) merged[k] = v;
    else
      merged = list[i];
    out.push_back(parse_experiment(merged, "experiments[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string summary_csv(const std::vector<InequalityReport>& reports) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream os;
  os << "theorem,kappa,weight,shape,lhs,rhs,margin,status\n";
  for (const auto& r : reports)
    os << to_string(r.spec.theorem) << ',' << r.spec.kappa << ',' << field(r.weight_label) << ','
       << field(r.shape_label) << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.margin) << ','
       << to_string(r.status) << '\n';
  return os.str();
}

std::string report_json(const std::vector<InequalityReport>& reports) {
  auto finite = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  Json arr = Json::array();
  int counts[3] = {0, 0, 0};
  for (const auto& r : reports) {
    ++counts[static_cast<int>(r.status)];
    Json spec = {{"theorem", to_string(r.spec.theorem)},
                 {"kappa", r.spec.kappa},
                 {"dim", r.spec.dim},
                 {"weight", r.weight_label},
                 {"shape", r.shape_label},
                 {"mesh_h", r.spec.mesh_h},
                 {"num_levels", r.spec.num_levels},
                 {"tolerance", r.spec.tolerance}};
    if (!r.spec.radii.empty()) spec["radii"] = r.spec.radii;
    Json diag = Json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = finite(v);
    Json notes = Json::object();
    for (const auto& [k, v] : r.notes) {
      if (notes.contains(k))
        notes[k] = notes[k].get<std::string>() + "; " + v;
      else
        notes[k] = v;
    }
    arr.push_back({{"spec", spec},
                   {"lhs", finite(r.lhs)},
                   {"rhs", finite(r.rhs)},
                   {"margin", finite(r.margin)},
                   {"hypothesis_check",
                    {{"pass", r.hypothesis.pass}, {"required", r.hypothesis.required}, {"detail", r.hypothesis.detail}}},
                   {"status", to_string(r.status)},
                   {"runtime_ms", r.runtime_ms},
                   {"diagnostics", diag},
                   {"notes", notes}});
  }
  Json root = {{"experiments", arr},
               {"summary", {{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}}}};
  return root.dump(2) + "\n";
}

int exit_code_for(const std::vector<InequalityReport>& reports) {
  bool fail_seen = false, inconclusive = false;
  for (const auto& r : reports) {
    fail_seen |= r.status == Status::Fail;
    inconclusive |= r.status == Status::Inconclusive;
  }
  return fail_seen ? 2 : (inconclusive ? 3 : 0);
}

SuiteOutcome run_suite(const std::string& config_path, const std::string& out_dir) {
  SuiteOutcome out;
  std::vector<ExperimentSpec> specs;
  try {
    std::ifstream in(config_path);
    if (!in) fail(ErrorCode::Io, "cannot read config " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    specs = parse_config(ss.str());
  } catch (const Error& e) {
    out.exit_code = 1;
    out.error = e.what();
    return out;
  }
  std::stable_sort(specs.begin(), specs.end(),
                   [](const ExperimentSpec& a, const ExperimentSpec& b) { return a.identity() < b.identity(); });
  for (const auto& s : specs) out.reports.push_back(run_experiment(s));
  out.exit_code = exit_code_for(out.reports);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream csv(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
  std::ofstream json(std::filesystem::path(out_dir) / "report.json", std::ios::binary);
  if (!csv || !json) {
    out.exit_code = 1;
    out.error = "cannot write reports into " + out_dir;
    return out;
  }
  csv << summary_csv(out.reports);
  json << report_json(out.reports);
  return out;
}

}  // namespace wlspec
