#include "wlspec/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

constexpr double kBary[3][3] = {
    {2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};

ConformalPoint gauss_point(const ConformalPoint& a, const ConformalPoint& b,
                           const ConformalPoint& c, int q) {
  const auto& w = kBary[q];
  return {w[0] * a.x + w[1] * b.x + w[2] * c.x, w[0] * a.y + w[1] * b.y + w[2] * c.y};
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Reduced {
  SparseMatrix K, M;
};

Reduced restrict_to_free(const FemSystem& sys) {
  const int n = static_cast<int>(sys.stiffness.rows());
  std::vector<int> map(n, -1);
  for (std::size_t i = 0; i < sys.free_dofs.size(); ++i) map[sys.free_dofs[i]] = static_cast<int>(i);
  const int m = static_cast<int>(sys.free_dofs.size());
  auto restrict = [&](const SparseMatrix& A) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonZeros());
    for (int col = 0; col < A.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
        const int r = map[it.row()], c = map[it.col()];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    SparseMatrix B(m, m);
    B.setFromTriplets(trips.begin(), trips.end());
    return B;
  };
  return {restrict(sys.stiffness), restrict(sys.mass)};
}

double max_abs_row_sum(const SparseMatrix& A) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(A.rows());
  for (int col = 0; col < A.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) sums[it.row()] += std::abs(it.value());
  return sums.size() ? sums.maxCoeff() : 0.0;
}

}  // namespace

FemSystem assemble(const TriMesh& mesh, const WeightField& weight, BoundaryCondition bc) {
  const int nv = static_cast<int>(mesh.num_vertices());
  if (nv < 3 || mesh.num_triangles() == 0) fail(ErrorCode::InvalidMesh, "empty mesh");
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * mesh.num_triangles());
  mt.reserve(9 * mesh.num_triangles());
  double volume = 0.0;

  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles[e];
    const ConformalPoint& a = mesh.vertices[tri[0]];
    const ConformalPoint& b = mesh.vertices[tri[1]];
    const ConformalPoint& c = mesh.vertices[tri[2]];
    const double area = mesh.triangle_area(e);
    if (!(area > 1e-14)) fail(ErrorCode::InvalidMesh, "degenerate or inverted triangle");

    // Gradients of the barycentric coordinates.
    const double gx[3] = {(b.y - c.y) / (2 * area), (c.y - a.y) / (2 * area), (a.y - b.y) / (2 * area)};
    const double gy[3] = {(c.x - b.x) / (2 * area), (a.x - c.x) / (2 * area), (b.x - a.x) / (2 * area)};

    double dens_avg = 0.0;
    double mloc[3][3] = {};
    for (int q = 0; q < 3; ++q) {
      const ConformalPoint p = gauss_point(a, b, c, q);
      const double rho = weight.model.conformal_factor(p);
      const double d = weight.density(p);
      dens_avg += d / 3.0;
      const double wq = area / 3.0 * rho * rho * d;
      volume += wq;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mloc[i][j] += wq * kBary[q][i] * kBary[q][j];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], area * dens_avg * (gx[i] * gx[j] + gy[i] * gy[j]));
        mt.emplace_back(tri[i], tri[j], mloc[i][j]);
      }
  }

  FemSystem sys;
  sys.bc = bc;
  sys.weighted_volume = volume;
  sys.stiffness.resize(nv, nv);
  sys.mass.resize(nv, nv);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  const auto mask = mesh.boundary_mask();
  for (int i = 0; i < nv; ++i)
    if (bc == BoundaryCondition::Neumann || !mask[i]) sys.free_dofs.push_back(i);
  if (sys.free_dofs.empty()) fail(ErrorCode::InvalidMesh, "mesh has no interior vertices");
  return sys;
}

SpectrumResult solve_spectrum(const FemSystem& system, int k, const SpectrumOptions& options) {
  const Reduced red = restrict_to_free(system);
  const int n = static_cast<int>(red.K.rows());
  if (k < 1 || k > n) fail(ErrorCode::Domain, "requested eigenpair count out of range");
  const int m = std::min(n, std::max(2 * k, k + 8));

  // Scale of the smallest eigenvalues: average Rayleigh quotient over the
  // dofs divided by the dof count.
  const double scale = red.K.diagonal().sum() / red.M.diagonal().sum() / n;
  double sigma = system.bc == BoundaryCondition::Neumann ? -0.1 * scale : 0.0;

  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  for (int attempt = 0;; ++attempt) {
    SparseMatrix A = red.K - sigma * red.M;
    ldlt.compute(A);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) break;
    if (attempt >= 4) fail(ErrorCode::Convergence, "shifted stiffness matrix not positive definite");
    sigma = sigma == 0.0 ? -1e-3 * scale : 10.0 * sigma;
  }

  // Deterministic start block: a constant plus smooth oscillations in the
  // dof index, which overlaps every low mode.
  Eigen::MatrixXd X(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      X(i, j) = j == 0 ? 1.0 : std::cos(0.7 * j * (i + 1) + 0.3 * j * j) + 0.01 * std::sin(1.3 * i);

  const double normK = max_abs_row_sum(red.K);
  Eigen::VectorXd lambda;
  Eigen::MatrixXd V;
  std::vector<double> resid(k, 0.0);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    Eigen::MatrixXd Y(n, m);
    const Eigen::MatrixXd MX = red.M * X;
    for (int j = 0; j < m; ++j) Y.col(j) = ldlt.solve(MX.col(j));
    const Eigen::MatrixXd KY = red.K * Y;
    const Eigen::MatrixXd MY = red.M * Y;
    Eigen::MatrixXd A = Y.transpose() * KY;
    Eigen::MatrixXd B = Y.transpose() * MY;
    A = 0.5 * (A + A.transpose());
    B = 0.5 * (B + B.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, B);
    if (ges.info() != Eigen::Success) fail(ErrorCode::Convergence, "Rayleigh-Ritz step failed");
    lambda = ges.eigenvalues();
    V = ges.eigenvectors();
    X = Y * V;

    const Eigen::MatrixXd KX = KY * V;
    const Eigen::MatrixXd MXn = MY * V;
    bool done = true;
    for (int j = 0; j < k; ++j) {
      const double r = (KX.col(j) - lambda[j] * MXn.col(j)).norm();
      // Near-zero eigenvalues (Neumann constants) have ||K x|| ~ roundoff,
      // so measure them against the matrix scale instead.
      const double ref = lambda[j] > 1e-6 * scale ? KX.col(j).norm() : 1e-4 * normK * X.col(j).norm();
      resid[j] = r / ref;
      if (!(resid[j] <= options.residual_tol)) done = false;
    }
    if (done) break;
  }
  if (it >= options.max_iterations) {
    std::ostringstream os;
    os << "subspace iteration did not converge (worst residual "
       << *std::max_element(resid.begin(), resid.end()) << ")";
    fail(ErrorCode::Convergence, os.str());
  }

  SpectrumResult out;
  out.bc = system.bc;
  out.weighted_volume = system.weighted_volume;
  out.iterations = it + 1;
  out.residuals = resid;
  const int nv = static_cast<int>(system.stiffness.rows());
  for (int j = 0; j < k; ++j) {
    out.eigenvalues.push_back(lambda[j]);
    std::vector<double> full(nv, 0.0);
    Eigen::Index imax = 0;
    X.col(j).cwiseAbs().maxCoeff(&imax);
    const double sign = X(imax, j) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) full[system.free_dofs[i]] = sign * X(i, j);
    out.eigenfields.push_back(std::move(full));
  }
  return out;
}

double rayleigh_quotient(const std::vector<double>& values, const FemSystem& system) {
  if (values.size() != static_cast<std::size_t>(system.stiffness.rows()))
    fail(ErrorCode::Domain, "field size does not match the mesh");
  const Eigen::VectorXd f = to_vector(values);
  const double den = f.dot(system.mass * f);
  if (!(den > 0.0)) fail(ErrorCode::Domain, "Rayleigh quotient of a zero field");
  return f.dot(system.stiffness * f) / den;
}

double weighted_mean(const std::vector<double>& values, const FemSystem& system) {
  const Eigen::VectorXd f = to_vector(values);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(f.size());
  return one.dot(system.mass * f) / one.dot(system.mass * one);
}

int nodal_domain_count(const TriMesh& mesh, const std::vector<double>& values, double rel_threshold) {
  if (values.size() != mesh.num_vertices()) fail(ErrorCode::Domain, "field size does not match the mesh");
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0;
  const double thr = rel_threshold * vmax;
  auto sgn = [&](int i) { return values[i] > thr ? 1 : (values[i] < -thr ? -1 : 0); };

  std::vector<int> parent(values.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (sgn(a) != 0 && sgn(a) == sgn(b)) parent[find(a)] = find(b);
    }
  int count = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (sgn(static_cast<int>(i)) != 0 && find(static_cast<int>(i)) == static_cast<int>(i)) ++count;
  return count;
}

bool in_convex_hull(const TriMesh& mesh, ConformalPoint p) {
  std::vector<ConformalPoint> pts = mesh.vertices;
  std::sort(pts.begin(), pts.end(),
            [](const ConformalPoint& a, const ConformalPoint& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const ConformalPoint& o, const ConformalPoint& a, const ConformalPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  // Andrew's monotone chain.
  std::vector<ConformalPoint> hull(2 * pts.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h > 0 ? h - 1 : 0);
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0.0) return false;
  return true;
}

Moment trial_moment(const TriMesh& mesh, const SpaceFormModel& model, const WeightProfile& profile,
                    const RadialEigenpair& trial, ConformalPoint origin) {
  Moment m;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles[e];
    const double area = mesh.triangle_area(e);
    for (int q = 0; q < 3; ++q) {
      const ConformalPoint p =
          gauss_point(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]], q);
      const double t = model.geodesic_distance(origin, p);
      const ConformalPoint xi = model.direction_from(origin, p);
      const double rho = model.conformal_factor(p);
      const double w = area / 3.0 * rho * rho * profile.density(t) * trial_h(trial, t).h;
      m.x += w * xi.x;
      m.y += w * xi.y;
    }
  }
  return m;
}

std::vector<double> interpolate_trial(const TriMesh& mesh, const SpaceFormModel& model,
                                      const RadialEigenpair& trial, ConformalPoint origin,
                                      int component) {
  std::vector<double> f(mesh.num_vertices());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ConformalPoint& p = mesh.vertices[i];
    const ConformalPoint xi = model.direction_from(origin, p);
    f[i] = trial_h(trial, model.geodesic_distance(origin, p)).h * (component == 0 ? xi.x : xi.y);
  }
  return f;
}

RecenterResult recenter_for_zero_mean(const TriMesh& mesh, const SpaceFormModel& model,
                                      const WeightProfile& profile, const TrialProvider& trial,
                                      int max_iterations) {
  RecenterResult res;
  auto threshold_at = [&](ConformalPoint s, const RadialEigenpair& pair) {
    double hmax = 0.0;
    for (double v : pair.samples_T) hmax = std::max(hmax, std::abs(v));
    return 1e-8 * hmax * mesh_weighted_volume(mesh, WeightField{model, profile, s});
  };
  auto moment_at = [&](ConformalPoint s) { return trial_moment(mesh, model, profile, trial(s), s); };

  // Start from the area centroid of the planar mesh.
  ConformalPoint s{};
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles[e];
    const double a = mesh.triangle_area(e);
    for (int v = 0; v < 3; ++v) {
      s.x += a / 3.0 * mesh.vertices[tri[v]].x;
      s.y += a / 3.0 * mesh.vertices[tri[v]].y;
    }
    total += a;
  }
  s.x /= total;
  s.y /= total;
  if (!in_convex_hull(mesh, s) || !model.contains(s)) s = {};

  try {
    RadialEigenpair pair = trial(s);
    Moment g = trial_moment(mesh, model, profile, pair, s);
    for (int it = 0;; ++it) {
      res.iterations = it;
      res.threshold = threshold_at(s, pair);
      res.moment_norm = g.norm();
      res.shift = s;
      if (g.norm() <= res.threshold) {
        res.converged = true;
        return res;
      }
      if (it >= max_iterations) break;

      const double d = 1e-6;
      const Moment gx = moment_at({s.x + d, s.y});
      const Moment gy = moment_at({s.x, s.y + d});
      const double j11 = (gx.x - g.x) / d, j21 = (gx.y - g.y) / d;
      const double j12 = (gy.x - g.x) / d, j22 = (gy.y - g.y) / d;
      const double det = j11 * j22 - j12 * j21;
      if (!(std::abs(det) > 0.0)) {
        res.failure = "singular moment Jacobian";
        return res;
      }
      const double dx = -(j22 * g.x - j12 * g.y) / det;
      const double dy = -(-j21 * g.x + j11 * g.y) / det;

      // Damped step: stay inside the hull and decrease the moment.
      double step = 1.0;
      bool accepted = false;
      for (int k = 0; k < 30; ++k, step *= 0.5) {
        const ConformalPoint cand{s.x + step * dx, s.y + step * dy};
        if (!model.contains(cand) || !in_convex_hull(mesh, cand)) continue;
        RadialEigenpair cpair = trial(cand);
        const Moment cg = trial_moment(mesh, model, profile, cpair, cand);
        if (cg.norm() < g.norm()) {
          s = cand;
          g = cg;
          pair = std::move(cpair);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        res.failure = "line search failed to reduce the moment";
        return res;
      }
    }
    res.failure = "recentering did not converge";
  } catch (const Error& e) {
    res.failure = e.what();
  }
  return res;
}

}  // namespace wlspec
