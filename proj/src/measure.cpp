#include "wlspec/measure.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

// S_kappa without range checks, for quadrature nodes strictly inside [0, R].
double s_raw(Curvature k, double t) {
  switch (k) {
    case Curvature::Spherical: return std::sin(t);
    case Curvature::Euclidean: return t;
    case Curvature::Hyperbolic: return std::sinh(t);
  }
  return t;
}

double radius_limit(const SpaceFormModel& model, const WeightProfile& profile) {
  return std::min(model.max_radius(), profile.domain_sup());
}

void check_radius(const SpaceFormModel& model, const WeightProfile& profile, double R) {
  if (!(R > 0.0) || R > radius_limit(model, profile)) {
    std::ostringstream os;
    os << "ball radius " << R << " outside (0, " << radius_limit(model, profile) << "]";
    fail(ErrorCode::Domain, os.str());
  }
}

// Composite 20-point Gauss-Legendre on `panels` equal panels of [a, b].
template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i)
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a + i * w, a + (i + 1) * w);
  return sum;
}

// int_0^R S^{n-1} e^{-phi} dt, panel count doubled until two successive
// estimates agree to 1e-13 relative.
double radial_integral(const SpaceFormModel& model, const WeightProfile& profile, double R) {
  const int n = model.dimension();
  const Curvature k = model.kappa();
  auto f = [&](double t) { return std::pow(s_raw(k, t), n - 1) * profile.density(t); };
  double prev = composite_gauss(f, 0.0, R, 1);
  for (int panels = 2; panels <= 4096; panels *= 2) {
    const double next = composite_gauss(f, 0.0, R, panels);
    if (!std::isfinite(next)) break;
    if (std::abs(next - prev) <= 1e-13 * std::abs(next)) return next;
    prev = next;
  }
  fail(ErrorCode::Convergence, "weighted volume quadrature did not converge for " + profile.label());
}

}  // namespace

double unit_sphere_area(int n) {
  if (n < 1) fail(ErrorCode::Domain, "sphere dimension must be positive");
  // Gamma(n/2) by recurrence from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
  double gamma = (n % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (double x = (n % 2 == 0) ? 1.0 : 0.5; x < n / 2.0 - 1e-12; x += 1.0) gamma *= x;
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / gamma;
}

double ball_weighted_volume(const SpaceFormModel& model, const WeightProfile& profile, double R) {
  check_radius(model, profile, R);
  return unit_sphere_area(model.dimension()) * radial_integral(model, profile, R);
}

double ball_weighted_boundary_area(const SpaceFormModel& model, const WeightProfile& profile,
                                   double R) {
  check_radius(model, profile, R);
  if (R >= profile.domain_sup()) fail(ErrorCode::Domain, "weight undefined on the sphere of radius R");
  return unit_sphere_area(model.dimension()) *
         std::pow(s_raw(model.kappa(), R), model.dimension() - 1) * profile.density(R);
}

double solve_radius(const SpaceFormModel& model, const WeightProfile& profile, double target) {
  if (!(target > 0.0) || !std::isfinite(target))
    fail(ErrorCode::Domain, "target weighted volume must be positive");
  const double limit = radius_limit(model, profile);
  const double omega = unit_sphere_area(model.dimension());

  double lo = 0.0, hi = std::isfinite(limit) ? limit : 1.0;
  if (std::isfinite(limit)) {
    const double cap = omega * radial_integral(model, profile, limit);
    if (!(target < cap)) {
      std::ostringstream os;
      os << "weighted volume " << target << " unattainable: the largest admissible ball has " << cap;
      fail(ErrorCode::Domain, os.str());
    }
  } else {
    while (omega * radial_integral(model, profile, hi) < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e6) fail(ErrorCode::Convergence, "no radius bracket for the target volume");
    }
  }

  // Incremental quadrature from the lower end keeps each step cheap.
  const int n = model.dimension();
  const Curvature k = model.kappa();
  auto density = [&](double t) { return std::pow(s_raw(k, t), n - 1) * profile.density(t); };
  auto segment = [&](double a, double b) {
    // Bisection segments are short and the integrand smooth there.
    return omega * boost::math::quadrature::gauss<double, 20>::integrate(density, a, b);
  };
  double v_lo = lo > 0.0 ? omega * radial_integral(model, profile, lo) : 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double v_mid = v_lo + segment(lo, mid);
    if (v_mid < target) {
      lo = mid;
      v_lo = v_mid;
    } else {
      hi = mid;
    }
  }
  // Newton polish with the boundary area as derivative.
  double R = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double v = omega * radial_integral(model, profile, R);
    const double dv = omega * density(R);
    if (!(dv > 0.0)) break;
    const double next = R - (v - target) / dv;
    if (!(next > 0.0) || next > limit) break;
    R = next;
  }
  const double final_v = omega * radial_integral(model, profile, R);
  if (std::abs(final_v - target) > 1e-10 * target)
    fail(ErrorCode::Convergence, "radius search did not reach the target volume");
  return R;
}

double WeightField::distance(ConformalPoint p) const {
  if (center.x == 0.0 && center.y == 0.0) return model.geodesic_distance_to_origin(p);
  return model.geodesic_distance(center, p);
}

double WeightField::density(ConformalPoint p) const {
  const double t = distance(p);
  if (!(t < profile.domain_sup()))
    fail(ErrorCode::Domain, "point outside the domain of weight " + profile.label());
  return profile.density(t);
}

double WeightField::area_density(ConformalPoint p) const {
  const double rho = model.conformal_factor(p);
  return rho * rho * density(p);
}

double mesh_weighted_volume(const TriMesh& mesh, const WeightField& weight) {
  static constexpr double kBary[3][3] = {
      {2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.num_triangles(); ++i) {
    const double area = mesh.triangle_area(i);
    if (!(area > 1e-14)) fail(ErrorCode::InvalidMesh, "degenerate triangle in weighted volume");
    const auto& t = mesh.triangles[i];
    const auto &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
    double s = 0.0;
    for (const auto& w : kBary) {
      const ConformalPoint q{w[0] * a.x + w[1] * b.x + w[2] * c.x, w[0] * a.y + w[1] * b.y + w[2] * c.y};
      s += weight.area_density(q);
    }
    total += area * s / 3.0;
  }
  return total;
}

double mesh_weighted_volume(const TriMesh& mesh, const SpaceFormModel& model,
                            const WeightProfile& profile) {
  return mesh_weighted_volume(mesh, WeightField{model, profile, {}});
}

}  // namespace wlspec
