#include "wlspec/rearrange.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

constexpr double kBary[3][3] = {
    {2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};

double tri_area(const ConformalPoint& a, const ConformalPoint& b, const ConformalPoint& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double tri_volume(const WeightField& w, const ConformalPoint& a, const ConformalPoint& b,
                  const ConformalPoint& c) {
  const double area = std::abs(tri_area(a, b, c));
  if (area == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& q : kBary)
    s += w.area_density({q[0] * a.x + q[1] * b.x + q[2] * c.x, q[0] * a.y + q[1] * b.y + q[2] * c.y});
  return area * s / 3.0;
}

// Field values clamped at zero, after checking the sign precondition.
std::vector<double> checked_values(const FemField& field) {
  if (!field.mesh) fail(ErrorCode::Domain, "field has no mesh");
  if (field.nodal_values.size() != field.mesh->num_vertices())
    fail(ErrorCode::Domain, "field size does not match the mesh");
  std::vector<double> v = field.nodal_values;
  double sup = 0.0;
  for (double& x : v) {
    if (!(x >= -1e-12)) fail(ErrorCode::Domain, "field must be nonnegative");
    x = std::max(x, 0.0);
    sup = std::max(sup, x);
  }
  if (sup == 0.0) fail(ErrorCode::Domain, "field vanishes identically");
  return v;
}

// Weighted volume of {f > s} and of the triangles on which f == s, given
// clamped vertex values and per-triangle full volumes.
struct LevelVolumes {
  double open = 0.0;
  double flat = 0.0;
};

LevelVolumes level_volumes(const TriMesh& mesh, const std::vector<double>& f,
                           const std::vector<double>& full, const WeightField& w, double s,
                           double flat_tol) {
  LevelVolumes out;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangles[e];
    const double g[3] = {f[t[0]] - s, f[t[1]] - s, f[t[2]] - s};
    const double gmin = std::min({g[0], g[1], g[2]}), gmax = std::max({g[0], g[1], g[2]});
    if (gmin > 0.0) {
      out.open += full[e];
      continue;
    }
    if (gmax <= 0.0) {
      if (gmax >= -flat_tol && gmin >= -flat_tol) out.flat += full[e];
      continue;
    }
    // Clip against g > 0: at most a quadrilateral.
    ConformalPoint poly[4];
    int n = 0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const ConformalPoint& p = mesh.vertices[t[i]];
      const ConformalPoint& q = mesh.vertices[t[j]];
      if (g[i] > 0.0) poly[n++] = p;
      if ((g[i] > 0.0) != (g[j] > 0.0)) {
        const double lam = g[i] / (g[i] - g[j]);
        poly[n++] = {p.x + lam * (q.x - p.x), p.y + lam * (q.y - p.y)};
      }
    }
    for (int i = 1; i + 1 < n; ++i) out.open += tri_volume(w, poly[0], poly[i], poly[i + 1]);
  }
  return out;
}

std::vector<double> triangle_volumes(const TriMesh& mesh, const WeightField& w) {
  std::vector<double> full(mesh.num_triangles());
  for (std::size_t e = 0; e < full.size(); ++e) {
    const auto& t = mesh.triangles[e];
    full[e] = tri_volume(w, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return full;
}

double radius_for(const SpaceFormModel& model, const WeightProfile& profile, double v) {
  return v > 0.0 ? solve_radius(model, profile, v) : 0.0;
}

double p_of(const SpaceFormModel& model, const WeightProfile& profile, double t) {
  return std::pow(model.s_kappa(t), model.dimension() - 1) * profile.density(t);
}

}  // namespace

double superlevel_volume(const FemField& field, const SpaceFormModel& model,
                         const WeightProfile& profile, double s) {
  const auto f = checked_values(field);
  const WeightField w{model, profile, {}};
  return level_volumes(*field.mesh, f, triangle_volumes(*field.mesh, w), w, s, 0.0).open;
}

DistributionFunction distribution(const FemField& field, const SpaceFormModel& model,
                                  const WeightProfile& profile, int num_levels) {
  if (num_levels < 32) fail(ErrorCode::Domain, "num_levels must be at least 32");
  const auto f = checked_values(field);
  const TriMesh& mesh = *field.mesh;
  const WeightField w{model, profile, {}};
  const auto full = triangle_volumes(mesh, w);

  DistributionFunction d;
  d.sup = *std::max_element(f.begin(), f.end());
  for (double v : full) d.total_volume += v;
  const double flat_tol = 1e-14 * d.sup;
  for (int k = 0; k <= num_levels; ++k) {
    const double s = k == num_levels ? d.sup : d.sup * k / num_levels;
    LevelVolumes lv = level_volumes(mesh, f, full, w, s, flat_tol);
    d.levels.push_back(s);
    d.volumes.push_back(lv.open);
    d.volumes_closed.push_back(lv.open + lv.flat);
  }
  // Monotone by construction: quadrature of clipped pieces can differ from
  // the full-triangle rule in the last bits.
  d.volumes[num_levels] = 0.0;
  for (int k = num_levels; k >= 0; --k) {
    if (k < num_levels) d.volumes[k] = std::max(d.volumes[k], d.volumes_closed[k + 1]);
    d.volumes_closed[k] = std::max(d.volumes_closed[k], d.volumes[k]);
  }
  for (int k = 0; k <= num_levels; ++k) {
    d.volumes[k] = std::min(d.volumes[k], d.total_volume);
    d.volumes_closed[k] = std::min(d.volumes_closed[k], d.total_volume);
  }
  for (double v : d.volumes) d.radii.push_back(radius_for(model, profile, v));
  return d;
}

RadialRearrangement rearrange(const FemField& field, const SpaceFormModel& model,
                              const WeightProfile& profile, int num_levels) {
  const DistributionFunction d = distribution(field, model, profile, num_levels);
  RadialRearrangement r;
  r.num_levels = num_levels;
  r.radius = solve_radius(model, profile, d.total_volume);
  auto push = [&](double v, double s) {
    v = std::clamp(v, r.ball_volumes.empty() ? 0.0 : r.ball_volumes.back(), d.total_volume);
    r.ball_volumes.push_back(v);
    r.values.push_back(s);
  };
  for (int k = num_levels; k >= 0; --k) {
    push(d.volumes[k], d.levels[k]);
    push(d.volumes_closed[k], d.levels[k]);
  }
  // Outermost breakpoint sits on the ball boundary.
  if (r.ball_volumes.back() < d.total_volume) push(d.total_volume, 0.0);
  r.ball_volumes.back() = d.total_volume;
  for (double v : r.ball_volumes)
    r.radii_grid.push_back(v >= d.total_volume ? r.radius : radius_for(model, profile, v));
  return r;
}

double evaluate(const RadialRearrangement& r, const SpaceFormModel& model,
                const WeightProfile& profile, double t) {
  if (t < 0.0) fail(ErrorCode::Domain, "negative radius");
  if (t >= r.radius) return r.values.back();
  const double v = t > 0.0 ? ball_weighted_volume(model, profile, t) : 0.0;
  const auto& bv = r.ball_volumes;
  const std::size_t j = std::upper_bound(bv.begin(), bv.end(), v) - bv.begin();
  if (j == 0) return r.values.front();
  if (j >= bv.size()) return r.values.back();
  const double lam = (v - bv[j - 1]) / (bv[j] - bv[j - 1]);
  return r.values[j - 1] + lam * (r.values[j] - r.values[j - 1]);
}

double rearranged_superlevel_volume(const RadialRearrangement& r, const SpaceFormModel&,
                                    const WeightProfile&, double s) {
  const auto& bv = r.ball_volumes;
  const auto& val = r.values;
  if (val.front() <= s) return 0.0;
  for (std::size_t i = 0; i + 1 < bv.size(); ++i) {
    if (val[i + 1] > s) continue;
    if (val[i] == val[i + 1]) return bv[i];
    return bv[i] + (val[i] - s) / (val[i] - val[i + 1]) * (bv[i + 1] - bv[i]);
  }
  return bv.back();
}

double l2_identity_residual(const FemField& field, const RadialRearrangement& r,
                            const SpaceFormModel& model, const WeightProfile& profile) {
  const auto f = checked_values(field);
  const TriMesh& mesh = *field.mesh;
  const WeightField w{model, profile, {}};
  // Exact integral of the squared P1 interpolant against the weight, with
  // the same 3-point rule as the volumes.
  double domain = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
    const double area = std::abs(tri_area(a, b, c));
    for (const auto& q : kBary) {
      const double fq = q[0] * f[t[0]] + q[1] * f[t[1]] + q[2] * f[t[2]];
      domain += area / 3.0 * fq * fq *
                w.area_density({q[0] * a.x + q[1] * b.x + q[2] * c.x, q[0] * a.y + q[1] * b.y + q[2] * c.y});
    }
  }
  // psi is linear in the ball volume between breakpoints.
  double ball = 0.0;
  for (std::size_t i = 0; i + 1 < r.ball_volumes.size(); ++i) {
    const double a = r.values[i], b = r.values[i + 1];
    ball += (r.ball_volumes[i + 1] - r.ball_volumes[i]) * (a * a + a * b + b * b) / 3.0;
  }
  return std::abs(domain - ball) / domain;
}

EnergyComparison energy_comparison(const FemField& field, const RadialRearrangement& r,
                                   const SpaceFormModel& model, const WeightProfile& profile,
                                   const std::optional<AdmissibilityClass>& required) {
  EnergyComparison out;
  if (required) {
    const double t_max = std::min(r.radius, profile.domain_sup());
    const AdmissibilityVerdict v = check_admissibility(profile, *required, 2000, t_max);
    if (!v.pass) {
      out.hypotheses_met = false;
      out.note = "hypotheses unmet: " + v.detail;
    }
  }
  checked_values(field);
  const FemSystem sys = assemble(*field.mesh, WeightField{model, profile, {}}, BoundaryCondition::Neumann);
  const Eigen::Map<const Eigen::VectorXd> f(field.nodal_values.data(),
                                            static_cast<Eigen::Index>(field.nodal_values.size()));
  out.energy_domain = f.dot(sys.stiffness * f);

  // On a segment psi' = (ds/dV) omega p(t), so the energy there is
  // omega^3 (ds/dV)^2 int p^3 dt.
  const double omega = unit_sphere_area(model.dimension());
  auto p3 = [&](double t) {
    const double p = p_of(model, profile, t);
    return p * p * p;
  };
  for (std::size_t i = 0; i + 1 < r.ball_volumes.size(); ++i) {
    const double dv = r.ball_volumes[i + 1] - r.ball_volumes[i];
    const double ds = r.values[i + 1] - r.values[i];
    if (dv <= 0.0 || ds == 0.0) continue;
    const double ta = r.radii_grid[i], tb = r.radii_grid[i + 1];
    if (!(tb > ta)) continue;
    const double slope = ds / dv;
    out.energy_ball += omega * omega * omega * slope * slope *
                       boost::math::quadrature::gauss<double, 20>::integrate(p3, ta, tb);
  }
  return out;
}

double equimeasurability_error(const FemField& field, const RadialRearrangement& r,
                               const SpaceFormModel& model, const WeightProfile& profile, int count,
                               unsigned seed) {
  const auto f = checked_values(field);
  const double sup = *std::max_element(f.begin(), f.end());
  const WeightField w{model, profile, {}};
  const auto full = triangle_volumes(*field.mesh, w);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double s = sup * unif(rng);
    const double v = level_volumes(*field.mesh, f, full, w, s, 0.0).open;
    const double vs = rearranged_superlevel_volume(r, model, profile, s);
    if (v > 0.0) worst = std::max(worst, std::abs(v - vs) / v);
  }
  return worst;
}

void write_profile_csv(std::ostream& out, const RadialRearrangement& r) {
  auto fmt = [](double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  out << "t,psi\n";
  for (std::size_t i = 0; i < r.radii_grid.size(); ++i)
    out << fmt(r.radii_grid[i]) << ',' << fmt(r.values[i]) << '\n';
}

}  // namespace wlspec
