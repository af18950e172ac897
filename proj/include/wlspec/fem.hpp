#pragma once

// Weighted P1 finite elements for the Dirichlet and Neumann eigenproblems of
// the weighted Laplacian on planar model domains.
//
// In two dimensions the Dirichlet energy is conformally invariant, so the
// stiffness matrix uses the flat gradient weighted by e^{-phi} only, while
// the mass matrix carries the area element rho^2 e^{-phi}.

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "wlspec/measure.hpp"
#include "wlspec/mesh.hpp"
#include "wlspec/radial.hpp"

namespace wlspec {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FemField {
  const TriMesh* mesh = nullptr;
  std::vector<double> nodal_values;
};

// Full vertex-indexed matrices plus the list of free vertices (all of them
// for Neumann, the interior ones for Dirichlet).
struct FemSystem {
  SparseMatrix stiffness;
  SparseMatrix mass;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  std::vector<int> free_dofs;
  double weighted_volume = 0.0;
};

FemSystem assemble(const TriMesh& mesh, const WeightField& weight, BoundaryCondition bc);

struct SpectrumOptions {
  double residual_tol = 1e-8;
  int max_iterations = 2000;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;             // ascending
  std::vector<std::vector<double>> eigenfields;  // vertex-indexed, M-orthonormal
  std::vector<double> residuals;               // ||K u - lambda M u|| / ||K u||
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double weighted_volume = 0.0;
  int iterations = 0;
};

// k smallest generalized eigenpairs K u = lambda M u by shift-invert subspace
// iteration with a sparse LDL^T factorisation. Deterministic.
SpectrumResult solve_spectrum(const FemSystem& system, int k, const SpectrumOptions& options = {});

// f^T K f / f^T M f on vertex values.
double rayleigh_quotient(const std::vector<double>& values, const FemSystem& system);

// Weighted mean int f d eta / int d eta using the mass matrix.
double weighted_mean(const std::vector<double>& values, const FemSystem& system);

// Connected sign components of a P1 field (vertices with |f| above
// rel_threshold * max|f|, joined along mesh edges).
int nodal_domain_count(const TriMesh& mesh, const std::vector<double>& values,
                       double rel_threshold = 1e-8);

bool in_convex_hull(const TriMesh& mesh, ConformalPoint p);

// Moment of the Szego-Weinberger trial functions h(t_s) xi_s about the
// candidate origin s: int_Omega h(t_s) xi_s e^{-phi(t_s)} dv.
struct Moment {
  double x = 0.0, y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

struct RecenterResult {
  ConformalPoint shift{};
  double moment_norm = 0.0;
  double threshold = 0.0;  // 1e-8 * max|h| * |Omega|_phi at the final shift
  int iterations = 0;
  bool converged = false;
  std::string failure;  // empty on success
};

// Trial profile for a candidate origin: typically the radial (l=1, j=1)
// Neumann eigenpair on the ball whose weighted volume matches Omega's with
// the weight centered at that origin.
using TrialProvider = std::function<RadialEigenpair(ConformalPoint)>;

Moment trial_moment(const TriMesh& mesh, const SpaceFormModel& model,
                    const WeightProfile& profile, const RadialEigenpair& trial,
                    ConformalPoint origin);

RecenterResult recenter_for_zero_mean(const TriMesh& mesh, const SpaceFormModel& model,
                                      const WeightProfile& profile, const TrialProvider& trial,
                                      int max_iterations = 40);

// Vertex values of h(t_s) * xi_s[component] (component 0 or 1).
std::vector<double> interpolate_trial(const TriMesh& mesh, const SpaceFormModel& model,
                                      const RadialEigenpair& trial, ConformalPoint origin,
                                      int component);

}  // namespace wlspec
