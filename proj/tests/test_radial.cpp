#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wlspec/error.hpp"
#include "wlspec/radial.hpp"

using namespace wlspec;
constexpr double pi = std::numbers::pi;
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;

namespace {

RadialSolver solver(int kappa, int dim, const char* weight) {
  return RadialSolver(SpaceFormModel(curvature_from_int(kappa), dim), parse_profile(weight));
}

}  // namespace

TEST_CASE("planar unweighted disk reproduces Bessel zeros") {
  const auto s = solver(0, 2, "zero");
  struct Case {
    RadialMode mode;
    double expect;
  };
  const Case cases[] = {
      {{0, 1, D}, oracle::disk_dirichlet(0, 1)}, {{0, 2, D}, oracle::disk_dirichlet(0, 2)},
      {{1, 1, D}, oracle::disk_dirichlet(1, 1)}, {{2, 1, D}, oracle::disk_dirichlet(2, 1)},
      {{1, 1, N}, oracle::disk_neumann(1, 1)},   {{0, 2, N}, oracle::disk_neumann(0, 2)},
      {{2, 1, N}, oracle::disk_neumann(2, 1)},   {{0, 3, N}, oracle::disk_neumann(0, 3)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.mode.l);
    CAPTURE(c.mode.j);
    CHECK(s.eigenvalue(c.mode, 1.0) == doctest::Approx(c.expect).epsilon(1e-7));
  }
  CHECK(s.eigenvalue({0, 1, N}, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("Euclidean eigenvalues scale as R^-2") {
  for (int dim : {2, 3}) {
    const auto s = solver(0, dim, "zero");
    const double base = s.eigenvalue({1, 1, N}, 1.0);
    for (double R : {0.3, 2.0, 5.0}) CHECK(s.eigenvalue({1, 1, N}, R) * R * R == doctest::Approx(base).epsilon(1e-7));
  }
}

TEST_CASE("three-dimensional closed forms") {
  // With p = S^2 the substitution T = u / S turns the l = 0 problem into
  // u'' + (lambda + kappa) u = 0, u(0) = u(R) = 0.
  const auto h = solver(-1, 3, "zero");
  const auto e = solver(0, 3, "zero");
  const auto s = solver(1, 3, "zero");
  for (double R : {0.5, 1.0, 1.4}) {
    for (int j : {1, 2}) {
      const double k2 = std::pow(j * pi / R, 2);
      CHECK(h.eigenvalue({0, j, D}, R) == doctest::Approx(k2 + 1).epsilon(1e-7));
      CHECK(e.eigenvalue({0, j, D}, R) == doctest::Approx(k2).epsilon(1e-7));
      CHECK(s.eigenvalue({0, j, D}, R) == doctest::Approx(k2 - 1).epsilon(1e-7));
    }
  }
}

TEST_CASE("the j-th eigenfunction has j-1 interior zeros") {
  for (int kappa : {-1, 0, 1}) {
    for (const char* w : {"zero", "exp_dec", "linear_neg:1"}) {
      const auto s = solver(kappa, 2, w);
      for (auto bc : {D, N}) {
        for (int l : {0, 1, 2}) {
          for (int j = 1; j <= 3; ++j) {
            if (bc == N && l == 0 && j == 1) continue;
            const auto pair = s.eigenpair({l, j, bc}, 1.2);
            CAPTURE(kappa);
            CAPTURE(l);
            CAPTURE(j);
            CHECK(pair.node_count == j - 1);
          }
        }
      }
    }
  }
}

TEST_CASE("eigenvalues increase with j and the shooting count agrees") {
  const auto s = solver(-1, 2, "quad_neg:0.3");
  double prev = -1;
  for (int j = 1; j <= 4; ++j) {
    const double mu = s.eigenvalue({1, j, D}, 1.0);
    CHECK(mu > prev);
    prev = mu;
    CHECK(s.shoot({1, 1, D}, mu * (1 - 1e-3), 1.0).eigenvalues_below == j - 1);
    CHECK(s.shoot({1, 1, D}, mu * (1 + 1e-3), 1.0).eigenvalues_below == j);
  }
}

TEST_CASE("shooting agrees with the finite-difference oracle") {
  for (int kappa : {-1, 0, 1}) {
    for (const char* w : {"zero", "exp_dec", "quad_neg:0.3", "log_cos"}) {
      if (std::string(w) == "log_cos" && kappa != 1) continue;
      const auto s = solver(kappa, 2, w);
      for (RadialMode m : {RadialMode{0, 1, D}, RadialMode{1, 1, N}, RadialMode{0, 2, N}}) {
        const double a = s.eigenvalue(m, 0.9);
        const double b = s.fd_oracle_eigenvalue(m, 0.9, 2000);
        CAPTURE(kappa);
        CAPTURE(w);
        CHECK(std::abs(a - b) / a < 1e-5);
      }
    }
  }
}

TEST_CASE("eigenfunctions are normalised in L2(p dt)") {
  const auto s = solver(-1, 2, "exp_dec");
  const auto pair = s.eigenpair({1, 1, N}, 1.3);
  const std::size_t n = pair.samples_t.size();
  REQUIRE(n == 4001);
  const double h = pair.radius / (n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 1 : (i % 2 ? 4 : 2);
    sum += w * pair.samples_T[i] * pair.samples_T[i] * s.p(pair.samples_t[i]);
  }
  CHECK(sum * h / 3 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pair.samples_T[n / 2] > 0);
}

TEST_CASE("Wronskian identity for the first dipole and second radial mode") {
  for (int kappa : {-1, 0, 1}) {
    const auto s = solver(kappa, 2, "exp_dec");
    for (double R : {0.5, 1.2}) {
      const auto f = s.eigenpair({1, 1, N}, R);
      const auto g = s.eigenpair({0, 2, N}, R);
      CHECK(s.wronskian_residual(f, g, R) < 1e-6);
      CHECK(s.wronskian_residual(f, g, 0.5 * R) < 1e-6);
    }
  }
}

TEST_CASE("dipole lies below the second radial Neumann mode") {
  for (int kappa : {-1, 0, 1}) {
    const auto s = solver(kappa, 2, "zero");
    for (double R : {0.4, 1.0, 1.5}) {
      const auto summary = s.first_neumann(R);
      CHECK(summary.dipole_first);
      CHECK(summary.first_nonzero == doctest::Approx(summary.mu_1_1));
      CHECK(summary.mu_1_1 < summary.mu_0_2);
    }
  }
}

TEST_CASE("trial function monotonicity") {
  for (int kappa : {-1, 0}) {
    for (const char* w : {"zero", "linear_neg:1", "exp_dec"}) {
      const auto s = solver(kappa, 2, w);
      for (double R : {0.5, 1.0, 2.0}) {
        const auto pair = s.eigenpair({1, 1, N}, R);
        const auto m = check_trial_monotonicity(pair, s.model(), 2 * R, 2000);
        CAPTURE(w);
        CAPTURE(R);
        CHECK(m.h_non_decreasing);
        CHECK(m.q_non_increasing);
        CHECK(pair.derivative_node_count() == 0);
      }
    }
  }
  const auto s = solver(0, 2, "zero");
  const auto pair = s.eigenpair({1, 1, N}, 1.0);
  CHECK(trial_h(pair, 1.5).h == doctest::Approx(pair.samples_T.back()));
  CHECK(trial_h(pair, 1.5).hprime == 0.0);
  const double t = 0.37, e = 1e-6;
  CHECK(trial_h(pair, t).hprime == doctest::Approx((trial_h(pair, t + e).h - trial_h(pair, t - e).h) / (2 * e)).epsilon(1e-5));
}

TEST_CASE("FD matches closed forms as the grid is refined") {
  const auto e = solver(0, 2, "zero");
  const double exact = oracle::disk_dirichlet(0, 1);
  const double coarse = std::abs(e.fd_eigenvalue({0, 1, D}, 1.0, 200) - exact);
  const double fine = std::abs(e.fd_eigenvalue({0, 1, D}, 1.0, 400) - exact);
  CHECK(fine < coarse / 3);
  CHECK(std::abs(e.fd_oracle_eigenvalue({0, 1, D}, 1.0, 400) - exact) / exact < 1e-6);
}

TEST_CASE("errors") {
  const auto s = solver(1, 2, "zero");
  CHECK_THROWS_AS(s.eigenvalue({0, 1, D}, 1.7), Error);
  CHECK_THROWS_AS(s.eigenvalue({0, 1, D}, 0.0), Error);
  CHECK_THROWS_AS(s.eigenvalue({0, 0, D}, 1.0), Error);
  CHECK_THROWS_AS(s.eigenvalue({-1, 1, D}, 1.0), Error);
  CHECK(parse_boundary_condition("neumann") == N);
  CHECK_THROWS_AS(parse_boundary_condition("robin"), Error);
  const auto a = s.eigenpair({1, 1, N}, 1.0), b = s.eigenpair({0, 2, N}, 0.8);
  CHECK_THROWS_AS(s.wronskian_residual(a, b, 0.5), Error);
}
