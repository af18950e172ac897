#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wlspec/error.hpp"
#include "wlspec/fem.hpp"
#include "wlspec/measure.hpp"
#include "wlspec/rearrange.hpp"

using namespace wlspec;
constexpr double pi = std::numbers::pi;

namespace {

const SpaceFormModel E(Curvature::Euclidean, 2);
const WeightProfile zero = parse_profile("zero");

FemField tent(const TriMesh& m) {
  FemField f{&m, {}};
  for (auto v : m.vertices) f.nodal_values.push_back(std::max(0.0, 1.0 - v.norm()));
  return f;
}

FemField first_eigenfield(const TriMesh& m, const SpaceFormModel& model, const WeightProfile& w) {
  const auto sp = solve_spectrum(assemble(m, WeightField{model, w, {}}, BoundaryCondition::Dirichlet), 1);
  FemField f{&m, sp.eigenfields[0]};
  for (double& x : f.nodal_values) x = std::abs(x);
  return f;
}

}  // namespace

TEST_CASE("constant field rearranges to a constant") {
  const auto m = generate_mesh(ShapeSpec::parse("ellipse:1,0.5"), 0.05, E);
  FemField f{&m, std::vector<double>(m.num_vertices(), 2.0)};
  const auto r = rearrange(f, E, zero, 64);
  CHECK(r.radius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  CHECK(evaluate(r, E, zero, 0.0) == doctest::Approx(2.0));
  CHECK(evaluate(r, E, zero, 0.5 * r.radius) == doctest::Approx(2.0));
  CHECK(l2_identity_residual(f, r, E, zero) < 1e-12);
  const auto d = distribution(f, E, zero, 64);
  CHECK(d.volumes.back() == 0.0);
  CHECK(d.volumes_closed.back() == doctest::Approx(d.total_volume));  // plateau at the top level
}

TEST_CASE("tent on the unit disk is its own rearrangement") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.02, E);
  const auto f = tent(m);
  for (double s : {0.1, 0.5, 0.8}) CHECK(superlevel_volume(f, E, zero, s) == doctest::Approx(pi * (1 - s) * (1 - s)).epsilon(5e-3));
  const auto r = rearrange(f, E, zero, 256);
  for (double t : {0.1, 0.4, 0.7}) CHECK(evaluate(r, E, zero, t) == doctest::Approx(1 - t).epsilon(5e-3));
  CHECK(l2_identity_residual(f, r, E, zero) < 1e-2);
  CHECK(equimeasurability_error(f, r, E, zero) <= 2.0 / 256);
  const auto e = energy_comparison(f, r, E, zero);
  CHECK(e.energy_domain == doctest::Approx(pi).epsilon(5e-3));
  CHECK(e.energy_ball == doctest::Approx(pi).epsilon(5e-3));
  CHECK(e.energy_ball <= e.energy_domain * (1 + 1e-3));
}

TEST_CASE("L2 residual falls as the level count grows") {
  const auto m = generate_mesh(ShapeSpec::parse("square:1.5"), 0.05, E);
  FemField f{&m, {}};
  for (auto v : m.vertices) f.nodal_values.push_back((0.75 - std::abs(v.x)) * (0.75 - std::abs(v.y)));
  const double r64 = l2_identity_residual(f, rearrange(f, E, zero, 64), E, zero);
  const double r128 = l2_identity_residual(f, rearrange(f, E, zero, 128), E, zero);
  CHECK(r128 < r64);
  CHECK(r128 < 2.0 / 128);
}

TEST_CASE("Dirichlet eigenfields: Polya-Szego and equimeasurability") {
  const SpaceFormModel H(Curvature::Hyperbolic, 2);
  struct Case {
    const SpaceFormModel* model;
    const char* weight;
    const char* shape;
  };
  const Case cases[] = {
      {&E, "zero", "square:1.7724538509055159"},
      {&E, "quad_neg:0.3", "ellipse:1.4,0.7"},
      {&E, "zero", "dumbbell:0.6,0.2,0.5"},
      {&H, "quad_neg:0.3", "ellipse:0.6,0.3"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.shape);
    const auto w = parse_profile(c.weight);
    const auto m = generate_mesh(ShapeSpec::parse(c.shape), 0.04, *c.model);
    const auto f = first_eigenfield(m, *c.model, w);
    const auto r = rearrange(f, *c.model, w, 256);
    CHECK(l2_identity_residual(f, r, *c.model, w) < 1e-2);
    CHECK(equimeasurability_error(f, r, *c.model, w) <= 2.0 / 256);
    const auto e = energy_comparison(f, r, *c.model, w);
    CHECK(e.energy_ball <= e.energy_domain);
    CHECK(std::is_sorted(r.values.rbegin(), r.values.rend()));
    CHECK(std::is_sorted(r.radii_grid.begin(), r.radii_grid.end()));
    CHECK(r.radius == doctest::Approx(solve_radius(*c.model, w, mesh_weighted_volume(m, *c.model, w))));
    for (double s : {0.2, 0.6}) {
      const double lvl = s * r.values.front();
      CHECK(rearranged_superlevel_volume(r, *c.model, w, lvl) ==
            doctest::Approx(superlevel_volume(f, *c.model, w, lvl)).epsilon(2.0 / 256));
    }
  }
}

TEST_CASE("hypotheses are reported when the weight misses the class") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.1, E);
  const auto w = parse_profile("exp_dec");
  const auto f = first_eigenfield(m, E, w);
  const auto r = rearrange(f, E, w, 64);
  const auto e = energy_comparison(f, r, E, w, AdmissibilityClass{Admissibility::Concave});
  CHECK_FALSE(e.hypotheses_met);
  CHECK(e.note.rfind("hypotheses unmet", 0) == 0);
  CHECK(energy_comparison(f, r, E, w, AdmissibilityClass{Admissibility::Convex}).hypotheses_met);
}

TEST_CASE("profile CSV") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.1, E);
  const auto r = rearrange(tent(m), E, zero, 32);
  std::ostringstream os;
  write_profile_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,psi");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r.radii_grid.size());
}

TEST_CASE("errors") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.2, E);
  FemField zero_field{&m, std::vector<double>(m.num_vertices(), 0.0)};
  CHECK_THROWS_AS(rearrange(zero_field, E, zero), Error);
  FemField neg{&m, std::vector<double>(m.num_vertices(), -1.0)};
  CHECK_THROWS_AS(rearrange(neg, E, zero), Error);
  FemField short_field{&m, {1.0, 2.0}};
  CHECK_THROWS_AS(rearrange(short_field, E, zero), Error);
  CHECK_THROWS_AS(rearrange(tent(m), E, zero, 8), Error);
  CHECK_THROWS_AS(evaluate(rearrange(tent(m), E, zero, 32), E, zero, -1.0), Error);
}
