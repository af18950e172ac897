#include "wlspec/spaceform.hpp"

#include <complex>
#include <sstream>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

using cplx = std::complex<double>;

cplx as_complex(ConformalPoint p) { return {p.x, p.y}; }

// Sphere point of the stereographic preimage (north pole = model origin).
struct Vec3 {
  double x, y, z;
};

Vec3 lift_to_sphere(ConformalPoint p) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double d = 1.0 + r2;
  return {2.0 * p.x / d, 2.0 * p.y / d, (1.0 - r2) / d};
}

}  // namespace

Curvature curvature_from_int(int kappa) {
  switch (kappa) {
    case -1: return Curvature::Hyperbolic;
    case 0: return Curvature::Euclidean;
    case 1: return Curvature::Spherical;
    default: break;
  }
  fail(ErrorCode::Domain, "curvature must be -1, 0 or 1, got " + std::to_string(kappa));
}

SpaceFormModel::SpaceFormModel(Curvature kappa, int dimension)
    : kappa_(kappa), dimension_(dimension) {
  if (dimension < 2) fail(ErrorCode::Domain, "dimension must be at least 2");
  max_radius_ = kappa == Curvature::Spherical ? std::numbers::pi / 2
                                              : std::numeric_limits<double>::infinity();
}

void SpaceFormModel::check_t(double t) const {
  if (!(t >= 0.0) || !(t < max_radius_)) {
    std::ostringstream os;
    os << "radial coordinate " << t << " outside [0, " << max_radius_ << ")";
    fail(ErrorCode::Domain, os.str());
  }
}

void SpaceFormModel::check_point(ConformalPoint p) const {
  if (!contains(p)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") outside the " << describe() << " model";
    fail(ErrorCode::Domain, os.str());
  }
}

double SpaceFormModel::s_kappa(double t) const {
  check_t(t);
  switch (kappa_) {
    case Curvature::Spherical: return std::sin(t);
    case Curvature::Euclidean: return t;
    case Curvature::Hyperbolic: return std::sinh(t);
  }
  return 0.0;
}

double SpaceFormModel::c_kappa(double t) const {
  check_t(t);
  switch (kappa_) {
    case Curvature::Spherical: return std::cos(t);
    case Curvature::Euclidean: return 1.0;
    case Curvature::Hyperbolic: return std::cosh(t);
  }
  return 0.0;
}

bool SpaceFormModel::contains(ConformalPoint p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  if (kappa_ == Curvature::Hyperbolic) return p.x * p.x + p.y * p.y < 1.0;
  return true;
}

double SpaceFormModel::conformal_factor(ConformalPoint p) const {
  check_point(p);
  const double r2 = p.x * p.x + p.y * p.y;
  switch (kappa_) {
    case Curvature::Hyperbolic: return 2.0 / (1.0 - r2);
    case Curvature::Euclidean: return 1.0;
    case Curvature::Spherical: return 2.0 / (1.0 + r2);
  }
  return 1.0;
}

double SpaceFormModel::geodesic_distance_to_origin(ConformalPoint p) const {
  check_point(p);
  const double r = p.norm();
  switch (kappa_) {
    case Curvature::Hyperbolic: return 2.0 * std::atanh(r);  // ln((1+r)/(1-r))
    case Curvature::Euclidean: return r;
    case Curvature::Spherical: return 2.0 * std::atan(r);
  }
  return r;
}

double SpaceFormModel::geodesic_distance(ConformalPoint p, ConformalPoint q) const {
  check_point(p);
  check_point(q);
  switch (kappa_) {
    case Curvature::Euclidean: return std::hypot(p.x - q.x, p.y - q.y);
    case Curvature::Hyperbolic: {
      const cplx a = as_complex(p), b = as_complex(q);
      const double s = std::abs(a - b) / std::abs(1.0 - std::conj(b) * a);
      return 2.0 * std::atanh(s);
    }
    case Curvature::Spherical: {
      const Vec3 u = lift_to_sphere(p), v = lift_to_sphere(q);
      const double dot = u.x * v.x + u.y * v.y + u.z * v.z;
      const double cx = u.y * v.z - u.z * v.y;
      const double cy = u.z * v.x - u.x * v.z;
      const double cz = u.x * v.y - u.y * v.x;
      return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
    }
  }
  return 0.0;
}

ConformalPoint SpaceFormModel::direction_from(ConformalPoint base, ConformalPoint p) const {
  const cplx b = as_complex(base), z = as_complex(p);
  cplx w;
  switch (kappa_) {
    case Curvature::Euclidean: w = z - b; break;
    case Curvature::Hyperbolic: w = (z - b) / (1.0 - std::conj(b) * z); break;
    case Curvature::Spherical: w = (z - b) / (1.0 + std::conj(b) * z); break;
  }
  const double a = std::abs(w);
  if (a == 0.0) return {0.0, 0.0};
  return {w.real() / a, w.imag() / a};
}

double SpaceFormModel::model_radius(double t) const {
  if (!(t >= 0.0)) fail(ErrorCode::Domain, "negative geodesic radius");
  switch (kappa_) {
    case Curvature::Hyperbolic: return std::tanh(t / 2.0);
    case Curvature::Euclidean: return t;
    case Curvature::Spherical:
      if (t > max_radius_) fail(ErrorCode::Domain, "geodesic radius beyond the hemisphere");
      return std::tan(t / 2.0);
  }
  return t;
}

std::string SpaceFormModel::describe() const {
  switch (kappa_) {
    case Curvature::Hyperbolic: return "hyperbolic";
    case Curvature::Euclidean: return "euclidean";
    case Curvature::Spherical: return "hemisphere";
  }
  return "?";
}

}  // namespace wlspec
