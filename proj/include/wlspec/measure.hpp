#pragma once

// Weighted volumes |Omega|_phi = int_Omega e^{-phi} dv of balls and meshed
// domains, and inversion of the ball-volume function.

#include "wlspec/mesh.hpp"
#include "wlspec/spaceform.hpp"
#include "wlspec/weights.hpp"

namespace wlspec {

// Area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

// omega_{n-1} int_0^R S_kappa^{n-1} e^{-phi} dt. R may equal the hemisphere
// limit pi/2 (closed cap) since the quadrature never touches the endpoint.
double ball_weighted_volume(const SpaceFormModel& model, const WeightProfile& profile, double R);

// omega_{n-1} S_kappa(R)^{n-1} e^{-phi(R)}; also the derivative of the volume.
double ball_weighted_boundary_area(const SpaceFormModel& model, const WeightProfile& profile,
                                   double R);

// Radius of the centered ball with the given weighted volume.
double solve_radius(const SpaceFormModel& model, const WeightProfile& profile, double target);

// Radial weight as a planar density on the conformal model: the weight is
// centered at `center` (the model origin unless recentered).
struct WeightField {
  const SpaceFormModel& model;
  const WeightProfile& profile;
  ConformalPoint center{};

  double distance(ConformalPoint p) const;
  // e^{-phi(d(center, p))}
  double density(ConformalPoint p) const;
  // rho(p)^2 e^{-phi(d(center, p))}: the weighted area element in model
  // coordinates.
  double area_density(ConformalPoint p) const;
};

// Sum over triangles of the 3-point Gauss rule applied to rho^2 e^{-phi}.
double mesh_weighted_volume(const TriMesh& mesh, const WeightField& weight);
double mesh_weighted_volume(const TriMesh& mesh, const SpaceFormModel& model,
                            const WeightProfile& profile);

}  // namespace wlspec
