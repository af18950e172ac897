#pragma once

// Space forms of curvature -1, 0, +1 and their planar conformal models.
//
// All three geometries share the unit-disk picture: the Poincare disk for
// the hyperbolic plane, the identity for the Euclidean plane, and the
// stereographic projection from the south pole for the sphere (so the upper
// hemisphere is the closed unit disk and its equator is r = 1).

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace wlspec {

enum class Curvature : int { Hyperbolic = -1, Euclidean = 0, Spherical = 1 };

Curvature curvature_from_int(int kappa);
inline int to_int(Curvature c) { return static_cast<int>(c); }

struct ConformalPoint {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

class SpaceFormModel {
public:
  SpaceFormModel(Curvature kappa, int dimension);

  Curvature kappa() const { return kappa_; }
  int dimension() const { return dimension_; }
  // pi/2 for the hemisphere, +inf otherwise.
  double max_radius() const { return max_radius_; }

  double s_kappa(double t) const;
  double c_kappa(double t) const;

  double conformal_factor(ConformalPoint p) const;
  double geodesic_distance_to_origin(ConformalPoint p) const;
  // Geodesic distance between two model points.
  double geodesic_distance(ConformalPoint p, ConformalPoint q) const;

  // Unit tangent direction at `base` pointing towards `p`, expressed in the
  // frame obtained by moving `base` to the origin with an isometry of the
  // model. Returns (0,0) when p == base.
  ConformalPoint direction_from(ConformalPoint base, ConformalPoint p) const;

  // Model radius r of a centered geodesic disk of radius t (inverse of
  // geodesic_distance_to_origin).
  double model_radius(double t) const;

  // Whether p is an admissible point of the model.
  bool contains(ConformalPoint p) const;

  std::string describe() const;

private:
  void check_t(double t) const;
  void check_point(ConformalPoint p) const;

  Curvature kappa_;
  int dimension_;
  double max_radius_;
};

}  // namespace wlspec
