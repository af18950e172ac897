#pragma once

// Radial eigenproblems of the weighted Laplacian on centered geodesic balls.
//
// Separating f = T(t) G(xi) reduces Delta_phi f + mu f = 0 to
//
//   T'' + [(n-1) C/S - phi'] T' + (mu - v_l / S^2) T = 0,   v_l = l(l+n-2),
//
// equivalently (p T')' + (mu - v_l S^{-2}) p T = 0 with p = S^{n-1} e^{-phi}.
// Regularity at the origin: T'(0) = 0 for l = 0 and T ~ t^l for l >= 1.
// The j-th eigenfunction has exactly j-1 zeros in (0, R).

#include <vector>

#include "wlspec/spaceform.hpp"
#include "wlspec/weights.hpp"

namespace wlspec {

enum class BoundaryCondition { Dirichlet, Neumann };

const char* to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& s);

struct RadialMode {
  int l = 0;  // spherical-harmonic index
  int j = 1;  // radial overtone, 1-based
  BoundaryCondition bc = BoundaryCondition::Dirichlet;

  // Eigenvalue of the unit (n-1)-sphere, l(l+n-2).
  double sphere_eigenvalue(int n) const { return static_cast<double>(l) * (l + n - 2); }
};

struct ShootResult {
  double residual = 0.0;  // T(R) (Dirichlet) or T'(R) (Neumann), normalised by max|T|
  int node_count = 0;     // sign changes of T on (t0, R)
  // Count of eigenvalues of the boundary problem strictly below the trial
  // value, read off the unwrapped angle of (T, T') at R.
  int eigenvalues_below = 0;
};

struct RadialEigenpair {
  RadialMode mode;
  double radius = 0.0;
  double eigenvalue = 0.0;
  std::vector<double> samples_t;
  std::vector<double> samples_T;
  std::vector<double> samples_Tprime;
  int node_count = 0;

  // Interior zeros of T' (sign changes on the sample grid).
  int derivative_node_count() const;
};

struct RadialOptions {
  double eigenvalue_ceiling = 1e4;
  double start_fraction = 1e-6;  // t0 = start_fraction * R
  double integrator_tol = 1e-11;
  int samples = 4001;
};

struct NeumannBallSpectrumSummary {
  double mu_0_2 = 0.0;
  double mu_1_1 = 0.0;
  double first_nonzero = 0.0;
  bool dipole_first = false;  // mu_1_1 < mu_0_2
};

class RadialSolver {
public:
  RadialSolver(SpaceFormModel model, WeightProfile profile, RadialOptions options = {});

  const SpaceFormModel& model() const { return model_; }
  const WeightProfile& profile() const { return profile_; }

  // p(t) = S^{n-1}(t) e^{-phi(t)}
  double p(double t) const;

  ShootResult shoot(const RadialMode& mode, double trial_eigenvalue, double R) const;
  RadialEigenpair eigenpair(const RadialMode& mode, double R) const;
  double eigenvalue(const RadialMode& mode, double R) const { return eigenpair(mode, R).eigenvalue; }

  double first_dirichlet(double R) const;
  NeumannBallSpectrumSummary first_neumann(double R) const;

  // Independent check: symmetric tridiagonal finite-difference discretisation
  // of the Sturm-Liouville form, j-th eigenvalue via Sturm bisection.
  double fd_eigenvalue(const RadialMode& mode, double R, int gridpoints) const;
  // Richardson extrapolation of fd_eigenvalue on `gridpoints` and twice that.
  double fd_oracle_eigenvalue(const RadialMode& mode, double R, int gridpoints) const;

  // |p(fg' - f'g)(t) - int_0^t [alpha - beta + (tau - sigma)] p f g ds|,
  // relative to the larger of the two sides.
  double wronskian_residual(const RadialEigenpair& f, const RadialEigenpair& g, double t) const;

private:
  void check_radius(double R) const;
  double lower_bound(const RadialMode& mode) const;

  SpaceFormModel model_;
  WeightProfile profile_;
  RadialOptions options_;
};

struct TrialValue {
  double h = 0.0;
  double hprime = 0.0;
};

// h(t) = T(t) on [0, R], T(R) beyond; cubic Hermite interpolation of the
// stored samples.
TrialValue trial_h(const RadialEigenpair& pair, double t);

// Monotonicity of the trial function: h non-decreasing and
// q(t) = h'^2 + (n-1) h^2 / S(t)^2 non-increasing on a sample grid covering
// [0, t_max].
struct TrialMonotonicity {
  bool h_non_decreasing = true;
  bool q_non_increasing = true;
  double worst_h_drop = 0.0;
  double worst_q_rise = 0.0;  // relative to max q
};
TrialMonotonicity check_trial_monotonicity(const RadialEigenpair& pair,
                                           const SpaceFormModel& model, double t_max,
                                           int samples);

}  // namespace wlspec
