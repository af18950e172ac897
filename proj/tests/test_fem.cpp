#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wlspec/error.hpp"
#include "wlspec/fem.hpp"
#include "wlspec/measure.hpp"

using namespace wlspec;
constexpr double pi = std::numbers::pi;
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;

namespace {

const SpaceFormModel E(Curvature::Euclidean, 2);
const SpaceFormModel H(Curvature::Hyperbolic, 2);
const SpaceFormModel S(Curvature::Spherical, 2);
const WeightProfile zero = parse_profile("zero");

SpectrumResult spectrum(const TriMesh& m, const SpaceFormModel& model, const WeightProfile& w,
                        BoundaryCondition bc, int k, ConformalPoint c = {}) {
  return solve_spectrum(assemble(m, WeightField{model, w, c}, bc), k);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("unit disk against Bessel zeros") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 1.0 / 30, E);
  const auto d = spectrum(m, E, zero, D, 4);
  CHECK(rel(d.eigenvalues[0], oracle::disk_dirichlet(0, 1)) < 0.01);
  CHECK(rel(d.eigenvalues[1], oracle::disk_dirichlet(1, 1)) < 0.01);
  CHECK(rel(d.eigenvalues[2], oracle::disk_dirichlet(1, 1)) < 0.01);
  CHECK(rel(d.eigenvalues[3], oracle::disk_dirichlet(2, 1)) < 0.01);
  const auto n = spectrum(m, E, zero, N, 3);
  CHECK(std::abs(n.eigenvalues[0]) < 1e-8);
  CHECK(rel(n.eigenvalues[1], oracle::disk_neumann(1, 1)) < 0.01);
  CHECK(rel(n.eigenvalues[2], oracle::disk_neumann(1, 1)) < 0.01);
  for (double r : d.residuals) CHECK(r <= 1e-8);
}

TEST_CASE("square against the closed form") {
  const double s = 1.3;
  const auto m = generate_mesh(ShapeSpec::parse("square:1.3"), s / 30, E);
  CHECK(rel(spectrum(m, E, zero, D, 1).eigenvalues[0], 2 * pi * pi / (s * s)) < 0.01);
  CHECK(rel(spectrum(m, E, zero, N, 2).eigenvalues[1], pi * pi / (s * s)) < 0.01);
}

TEST_CASE("eigenfields are mass-orthonormal and reproduce their eigenvalues") {
  const auto m = generate_mesh(ShapeSpec::parse("ellipse:1.2,0.6"), 0.05, E);
  const auto sys = assemble(m, WeightField{E, parse_profile("exp_dec"), {}}, N);
  const auto sp = solve_spectrum(sys, 4);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Map<const Eigen::VectorXd> u(sp.eigenfields[i].data(), sp.eigenfields[i].size());
    for (int j = 0; j < 4; ++j) {
      const Eigen::Map<const Eigen::VectorXd> v(sp.eigenfields[j].data(), sp.eigenfields[j].size());
      CHECK(u.dot(sys.mass * v) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-8));
    }
    CHECK(rayleigh_quotient(sp.eigenfields[i], sys) == doctest::Approx(sp.eigenvalues[i]).scale(1.0).epsilon(1e-8));
  }
  CHECK(std::is_sorted(sp.eigenvalues.begin(), sp.eigenvalues.end()));
  // Neumann ground state is constant; higher modes have zero weighted mean.
  const auto& u0 = sp.eigenfields[0];
  const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
  CHECK(*hi - *lo < 1e-6 * std::abs(*hi));
  CHECK(std::abs(weighted_mean(sp.eigenfields[1], sys)) < 1e-8);
  CHECK(sys.weighted_volume == doctest::Approx(mesh_weighted_volume(m, E, parse_profile("exp_dec"))));
}

TEST_CASE("Dirichlet eigenfields vanish on the boundary") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.08, E);
  const auto sp = spectrum(m, E, zero, D, 2);
  for (int v : m.boundary_vertices) CHECK(sp.eigenfields[0][v] == 0.0);
  double mx = 0;
  for (double x : sp.eigenfields[0]) mx = std::max(mx, x);
  CHECK(mx > 0);  // sign convention: largest entry positive
}

TEST_CASE("nodal domains") {
  const auto m = generate_mesh(ShapeSpec::parse("square:1"), 0.05, E);
  const auto sp = spectrum(m, E, zero, D, 2);
  CHECK(nodal_domain_count(m, sp.eigenfields[0]) == 1);
  CHECK(nodal_domain_count(m, sp.eigenfields[1]) == 2);
  const auto two = generate_mesh(ShapeSpec::parse("two_disks:0.5,0.3"), 0.05, E);
  const auto n = spectrum(two, E, zero, N, 2);
  CHECK(std::abs(n.eigenvalues[1]) < 1e-6);  // disconnected: two constant modes
}

TEST_CASE("spectrum is invariant under rotation") {
  const auto m = generate_mesh(ShapeSpec::parse("ellipse:1,0.6"), 0.05, E);
  const auto r = rotated(m, 1.1);
  const auto a = spectrum(m, E, parse_profile("quad_neg:0.3"), D, 3);
  const auto b = spectrum(r, E, parse_profile("quad_neg:0.3"), D, 3);
  for (int i = 0; i < 3; ++i) CHECK(rel(a.eigenvalues[i], b.eigenvalues[i]) < 1e-8);
}

TEST_CASE("weighted and curved disks agree with the radial solver") {
  struct Case {
    const SpaceFormModel* model;
    const char* weight;
    const char* shape;
    double R;
    double model_radius;
  };
  const Case cases[] = {
      {&E, "exp_dec", "disk:1", 1.0, 1.0},
      {&E, "quad_neg:0.3", "disk:0.8", 0.8, 0.8},
      {&H, "zero", "disk:0.5", 2 * std::atanh(0.5), 0.5},
      {&H, "linear_neg:1", "disk:0.4", 2 * std::atanh(0.4), 0.4},
      {&S, "log_cos", "cap:0,0.8", 0.8, std::tan(0.4)},
      {&S, "zero", "cap:0,1.2", 1.2, std::tan(0.6)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.shape);
    CAPTURE(c.weight);
    const auto w = parse_profile(c.weight);
    const RadialSolver rs(*c.model, w);
    const auto m = generate_mesh(ShapeSpec::parse(c.shape), c.model_radius / 30, *c.model);
    CHECK(rel(mesh_weighted_volume(m, *c.model, w), ball_weighted_volume(*c.model, w, c.R)) < 2e-3);
    const auto d = spectrum(m, *c.model, w, D, 1);
    CHECK(rel(d.eigenvalues[0], rs.first_dirichlet(c.R)) < 0.01);
    const auto n = spectrum(m, *c.model, w, N, 2);
    CHECK(rel(n.eigenvalues[1], rs.first_neumann(c.R).first_nonzero) < 0.01);
  }
}

TEST_CASE("recentering finds the center of an off-center disk") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:0.6,0.3,-0.2"), 0.03, E);
  const auto w = parse_profile("exp_dec");
  const RadialSolver rs(E, w);
  const TrialProvider trial = [&](ConformalPoint c) {
    const double R = solve_radius(E, w, mesh_weighted_volume(m, WeightField{E, w, c}));
    return rs.eigenpair({1, 1, N}, R);
  };
  const auto rec = recenter_for_zero_mean(m, E, w, trial);
  REQUIRE(rec.converged);
  CHECK(rec.failure.empty());
  CHECK(rec.moment_norm <= rec.threshold);
  CHECK(rec.shift.x == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(rec.shift.y == doctest::Approx(-0.2).epsilon(1e-3));
  const auto mom = trial_moment(m, E, w, trial(rec.shift), rec.shift);
  CHECK(mom.norm() <= rec.threshold * 1.0001);
}

TEST_CASE("recentering in the hyperbolic model") {
  const auto m = generate_mesh(ShapeSpec::parse("ellipse:0.6,0.3,20,0.1,0.05"), 0.02, H);
  const RadialSolver rs(H, zero);
  const TrialProvider trial = [&](ConformalPoint c) {
    const double R = solve_radius(H, zero, mesh_weighted_volume(m, WeightField{H, zero, c}));
    return rs.eigenpair({1, 1, N}, R);
  };
  const auto rec = recenter_for_zero_mean(m, H, zero, trial);
  REQUIRE(rec.converged);
  CHECK(rec.moment_norm <= rec.threshold);
  CHECK(in_convex_hull(m, rec.shift));
  // The trial components have zero weighted mean about the new origin.
  const auto sys = assemble(m, WeightField{H, zero, rec.shift}, N);
  const auto pair = trial(rec.shift);
  for (int c = 0; c < 2; ++c) {
    const auto f = interpolate_trial(m, H, pair, rec.shift, c);
    double mx = 0;
    for (double x : f) mx = std::max(mx, std::abs(x));
    CHECK(std::abs(weighted_mean(f, sys)) < 1e-3 * mx);
  }
}

TEST_CASE("convex hull") {
  const auto m = generate_mesh(ShapeSpec::parse("square:1"), 0.1, E);
  CHECK(in_convex_hull(m, {0, 0}));
  CHECK(in_convex_hull(m, {0.49, -0.49}));
  CHECK_FALSE(in_convex_hull(m, {0.6, 0}));
  const auto two = generate_mesh(ShapeSpec::parse("two_disks:0.5,0.4"), 0.1, E);
  CHECK(in_convex_hull(two, {0, 0}));  // in the hull though outside the domain
}

TEST_CASE("errors") {
  const auto m = generate_mesh(ShapeSpec::parse("disk:1"), 0.2, E);
  const auto sys = assemble(m, WeightField{E, zero, {}}, D);
  CHECK_THROWS_AS(solve_spectrum(sys, 0), Error);
  CHECK_THROWS_AS(solve_spectrum(sys, 100000), Error);
  CHECK_THROWS_AS(rayleigh_quotient(std::vector<double>(3, 1.0), sys), Error);
}
