#include "wlspec/radial.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (T, T')

constexpr double kPi = std::numbers::pi;
constexpr double kRescale = 1e100;

double s_raw(Curvature k, double t) {
  switch (k) {
    case Curvature::Spherical: return std::sin(t);
    case Curvature::Euclidean: return t;
    case Curvature::Hyperbolic: return std::sinh(t);
  }
  return t;
}

// C_kappa / S_kappa
double cot_raw(Curvature k, double t) {
  switch (k) {
    case Curvature::Spherical: return std::cos(t) / std::sin(t);
    case Curvature::Euclidean: return 1.0 / t;
    case Curvature::Hyperbolic: return std::cosh(t) / std::sinh(t);
  }
  return 1.0 / t;
}

struct RadialOde {
  Curvature kappa;
  int n;
  double v;   // sphere eigenvalue v_l
  double mu;  // trial eigenvalue
  const WeightProfile* profile;

  void operator()(const State& x, State& dxdt, double t) const {
    const double s = s_raw(kappa, t);
    const double drift = (n - 1) * cot_raw(kappa, t) - profile->d1(t);
    dxdt[0] = x[1];
    dxdt[1] = -drift * x[1] - (mu - v / (s * s)) * x[0];
  }
};

// Two-term Frobenius launch T ~ t^l (1 + a1 t + a2 t^2), divided by t0^l.
State series_start(const RadialMode& mode, int n, Curvature k, const WeightProfile& profile,
                   double mu, double t0) {
  const double l = mode.l;
  const double kap = static_cast<double>(to_int(k));
  const double v = mode.sphere_eigenvalue(n);
  const double g1 = profile.d1(0.0), g2 = profile.d2(0.0);
  const double a1 = g1 * l / (2 * l + n - 1);
  const double a2 =
      -(mu - (n - 1) * kap * l / 3.0 - v * kap / 3.0 - g1 * (l + 1) * a1 - g2 * l) / (2 * (2 * l + n));
  const double poly = 1 + a1 * t0 + a2 * t0 * t0;
  const double dpoly = a1 + 2 * a2 * t0;
  return {poly, (l / t0) * poly + dpoly};
}

struct Trajectory {
  std::vector<double> t, T, Tp;
};

struct IntegrationOutcome {
  State end{};
  double max_abs_T = 0.0;
  int sign_changes = 0;
  double angle = 0.0;  // unwrapped atan2(T, T')
};

// Integrates the radial ODE from t0 to R. When `out` is non-null the state
// is recorded at each point of `grid` (ascending, all > t0, last == R).
IntegrationOutcome integrate(const RadialOde& ode, State x, double t0, double R, double tol,
                             const std::vector<double>* grid, Trajectory* out) {
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  IntegrationOutcome res;
  double t = t0;
  double dt = t0 * 1e-2;
  const double max_dt = R / 200;
  double angle = std::atan2(x[0], x[1]);
  int last_sign = x[0] > 0 ? 1 : (x[0] < 0 ? -1 : 0);
  double max_T = std::abs(x[0]);
  int rescales = 0;

  std::size_t next_out = 0;
  auto target = [&] { return grid ? (*grid)[next_out] : R; };

  int guard = 0;
  while (true) {
    const double stop = target();
    if (t >= stop - 1e-15 * R) {
      if (out) {
        out->t.push_back(stop);
        out->T.push_back(x[0]);
        out->Tp.push_back(x[1]);
      }
      if (!grid || ++next_out == grid->size()) break;
      continue;
    }
    dt = std::min({dt, max_dt, stop - t});
    const auto r = stepper.try_step(ode, x, t, dt);
    if (r == odeint::fail) {
      if (dt < 1e-14 * std::max(t, 1e-300)) fail(ErrorCode::Convergence, "radial integrator step underflow");
      continue;
    }
    if (++guard > 50'000'000) fail(ErrorCode::Convergence, "radial integrator step budget exhausted");
    // Unwrap the phase angle.
    const double raw = std::atan2(x[0], x[1]);
    angle = raw + 2 * kPi * std::round((angle - raw) / (2 * kPi));
    const int sign = x[0] > 0 ? 1 : (x[0] < 0 ? -1 : 0);
    if (sign != 0 && last_sign != 0 && sign != last_sign && t < R * (1 - 1e-12)) ++res.sign_changes;
    if (sign != 0) last_sign = sign;
    max_T = std::max(max_T, std::abs(x[0]));
    if (std::abs(x[0]) > kRescale || std::abs(x[1]) > kRescale) {
      if (out) fail(ErrorCode::Convergence, "eigenfunction overflow while sampling");
      const double f = std::max(std::abs(x[0]), std::abs(x[1]));
      x[0] /= f;
      x[1] /= f;
      max_T /= f;
      if (++rescales > 1000000) fail(ErrorCode::Convergence, "radial solution rescaling overflow");
    }
  }
  res.end = x;
  res.max_abs_T = max_T;
  res.angle = angle;
  return res;
}

int count_sign_changes(const std::vector<double>& v, double threshold, std::size_t first,
                       std::size_t last) {
  int count = 0, prev = 0;
  for (std::size_t i = first; i < last; ++i) {
    const int s = v[i] > threshold ? 1 : (v[i] < -threshold ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

// Composite Simpson on a uniform grid over samples [0, k]; 3/8 rule on the
// tail when k is odd.
double simpson(const std::vector<double>& f, double h, std::size_t k) {
  if (k == 0) return 0.0;
  if (k == 1) return 0.5 * h * (f[0] + f[1]);
  double sum = 0.0;
  std::size_t end = k;
  if (k % 2 == 1) {
    end = k - 3;
    sum += 3.0 * h / 8.0 * (f[end] + 3 * f[end + 1] + 3 * f[end + 2] + f[end + 3]);
  }
  for (std::size_t i = 0; i + 2 <= end; i += 2) sum += h / 3.0 * (f[i] + 4 * f[i + 1] + f[i + 2]);
  return sum;
}

}  // namespace

const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

BoundaryCondition parse_boundary_condition(const std::string& s) {
  if (s == "dirichlet" || s == "D") return BoundaryCondition::Dirichlet;
  if (s == "neumann" || s == "N") return BoundaryCondition::Neumann;
  fail(ErrorCode::Domain, "boundary condition must be dirichlet or neumann, got '" + s + "'");
}

int RadialEigenpair::derivative_node_count() const {
  double m = 0.0;
  for (double v : samples_Tprime) m = std::max(m, std::abs(v));
  return count_sign_changes(samples_Tprime, 1e-7 * m, 1, samples_Tprime.size() - 1);
}

RadialSolver::RadialSolver(SpaceFormModel model, WeightProfile profile, RadialOptions options)
    : model_(model), profile_(std::move(profile)), options_(options) {}

double RadialSolver::p(double t) const {
  return std::pow(s_raw(model_.kappa(), t), model_.dimension() - 1) * profile_.density(t);
}

void RadialSolver::check_radius(double R) const {
  const double limit = std::min(model_.max_radius(), profile_.domain_sup());
  if (!(R > 0.0) || !(R < limit)) {
    std::ostringstream os;
    os << "ball radius " << R << " outside (0, " << limit << ")";
    fail(ErrorCode::Domain, os.str());
  }
}

ShootResult RadialSolver::shoot(const RadialMode& mode, double trial, double R) const {
  check_radius(R);
  if (!std::isfinite(trial)) fail(ErrorCode::Domain, "trial eigenvalue must be finite");
  if (mode.l < 0 || mode.j < 1) fail(ErrorCode::Domain, "mode needs l >= 0 and j >= 1");
  const int n = model_.dimension();
  const double t0 = options_.start_fraction * R;
  const RadialOde ode{model_.kappa(), n, mode.sphere_eigenvalue(n), trial, &profile_};
  const State x0 = series_start(mode, n, model_.kappa(), profile_, trial, t0);
  const auto res = integrate(ode, x0, t0, R, options_.integrator_tol, nullptr, nullptr);

  ShootResult out;
  const double scale = std::max(res.max_abs_T, 1e-300);
  out.residual = (mode.bc == BoundaryCondition::Dirichlet ? res.end[0] : res.end[1]) / scale;
  out.node_count = res.sign_changes;
  const double turns = res.angle / kPi;
  out.eigenvalues_below = mode.bc == BoundaryCondition::Dirichlet
                              ? static_cast<int>(std::floor(turns))
                              : static_cast<int>(std::floor(turns + 0.5));
  out.eigenvalues_below = std::max(out.eigenvalues_below, 0);
  return out;
}

double RadialSolver::lower_bound(const RadialMode& mode) const {
  return mode.bc == BoundaryCondition::Dirichlet ? 0.0 : -1.0;
}

RadialEigenpair RadialSolver::eigenpair(const RadialMode& mode, double R) const {
  check_radius(R);
  const int j = mode.j;
  double lo = lower_bound(mode);
  double hi = std::max(10.0, 10.0 / (R * R));
  while (shoot(mode, hi, R).eigenvalues_below < j) {
    lo = hi;
    hi *= 2.0;
    if (hi > 2 * options_.eigenvalue_ceiling) {
      std::ostringstream os;
      os << "no eigenvalue bracket below " << options_.eigenvalue_ceiling << " for mode (l="
         << mode.l << ", j=" << j << ")";
      fail(ErrorCode::Convergence, os.str());
    }
  }
  hi = std::min(hi, std::max(options_.eigenvalue_ceiling, lo));
  if (shoot(mode, hi, R).eigenvalues_below < j)
    fail(ErrorCode::Convergence, "eigenvalue exceeds the search ceiling");

  // Bisection on the eigenvalue count selects the right overtone.
  while (hi - lo > std::max(1e-10 * std::abs(hi), 1e-12)) {
    const double mid = 0.5 * (lo + hi);
    if (shoot(mode, mid, R).eigenvalues_below >= j) hi = mid;
    else lo = mid;
  }
  double mu = 0.5 * (lo + hi);
  // Secant polish on the endpoint residual, kept only inside the bracket.
  {
    const double r_lo = shoot(mode, lo, R).residual, r_hi = shoot(mode, hi, R).residual;
    if (r_lo != r_hi && (r_lo > 0) != (r_hi > 0)) {
      const double s = lo - r_lo * (hi - lo) / (r_hi - r_lo);
      if (s >= lo && s <= hi) mu = s;
    }
  }
  if (std::abs(mu) < 1e-11) mu = 0.0;

  // Sample the eigenfunction.
  const int n = model_.dimension();
  const int N = std::max(options_.samples | 1, 101);
  const double t0 = options_.start_fraction * R;
  const double dt = R / (N - 1);
  std::vector<double> grid;
  for (int i = 1; i < N; ++i) grid.push_back(i == N - 1 ? R : dt * i);
  const RadialOde ode{model_.kappa(), n, mode.sphere_eigenvalue(n), mu, &profile_};
  const State x0 = series_start(mode, n, model_.kappa(), profile_, mu, t0);
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.T.push_back(mode.l == 0 ? 1.0 : 0.0);
  traj.Tp.push_back(mode.l == 1 ? 1.0 / t0 : 0.0);
  integrate(ode, x0, t0, R, options_.integrator_tol, &grid, &traj);

  RadialEigenpair pair;
  pair.mode = mode;
  pair.radius = R;
  pair.eigenvalue = mu;
  // Normalise int_0^R T^2 p dt = 1.
  std::vector<double> w(traj.t.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = traj.t[i] > 0 ? traj.T[i] * traj.T[i] * p(traj.t[i]) : 0.0;
  const double norm = std::sqrt(simpson(w, dt, w.size() - 1));
  if (!(norm > 0) || !std::isfinite(norm)) fail(ErrorCode::Convergence, "degenerate eigenfunction");
  for (auto& v : traj.T) v /= norm;
  for (auto& v : traj.Tp) v /= norm;
  pair.samples_t = std::move(traj.t);
  pair.samples_T = std::move(traj.T);
  pair.samples_Tprime = std::move(traj.Tp);
  double m = 0.0;
  for (double v : pair.samples_T) m = std::max(m, std::abs(v));
  pair.node_count = count_sign_changes(pair.samples_T, 1e-7 * m, 1, pair.samples_T.size() - 1);
  return pair;
}

double RadialSolver::first_dirichlet(double R) const {
  return eigenvalue({0, 1, BoundaryCondition::Dirichlet}, R);
}

NeumannBallSpectrumSummary RadialSolver::first_neumann(double R) const {
  NeumannBallSpectrumSummary s;
  s.mu_0_2 = eigenvalue({0, 2, BoundaryCondition::Neumann}, R);
  s.mu_1_1 = eigenvalue({1, 1, BoundaryCondition::Neumann}, R);
  s.first_nonzero = std::min(s.mu_0_2, s.mu_1_1);
  s.dipole_first = s.mu_1_1 < s.mu_0_2;
  return s;
}

double RadialSolver::fd_eigenvalue(const RadialMode& mode, double R, int gridpoints) const {
  check_radius(R);
  if (gridpoints < 200) fail(ErrorCode::Domain, "finite-difference oracle needs at least 200 points");
  const int n = model_.dimension();
  const int N = gridpoints;
  const double h = R / N;
  const double v = mode.sphere_eigenvalue(n);
  const bool dirichlet = mode.bc == BoundaryCondition::Dirichlet;
  const int first = mode.l >= 1 ? 1 : 0;
  const int last = dirichlet ? N - 1 : N;
  const int m = last - first + 1;

  std::vector<double> diag(m), off(std::max(m - 1, 0)), mass(m);
  for (int k = 0; k < m; ++k) {
    const int i = first + k;
    const double t = i * h;
    const double flux_left = i > 0 ? p(t - h / 2) / h : 0.0;
    const double flux_right = i < N ? p(t + h / 2) / h : 0.0;
    double w;
    if (i == 0) w = p(h / 4) * h / 2;
    else if (i == N) w = p(R - h / 4) * h / 2;
    else w = p(t) * h;
    const double potential = i > 0 ? v / std::pow(s_raw(model_.kappa(), t), 2) * w : 0.0;
    diag[k] = flux_left + flux_right + potential;
    mass[k] = w;
    if (k + 1 < m) off[k] = -p(t + h / 2) / h;
  }
  // Symmetric scaling to a standard tridiagonal problem.
  for (int k = 0; k < m; ++k) diag[k] /= mass[k];
  for (int k = 0; k + 1 < m; ++k) off[k] /= std::sqrt(mass[k] * mass[k + 1]);

  // Sturm count: eigenvalues strictly below x.
  auto count_below = [&](double x) {
    int c = 0;
    double q = 1.0;
    for (int k = 0; k < m; ++k) {
      const double e2 = k > 0 ? off[k - 1] * off[k - 1] : 0.0;
      q = diag[k] - x - (k > 0 ? e2 / q : 0.0);
      if (q == 0.0) q = -1e-300;
      if (q < 0) ++c;
    }
    return c;
  };
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < m; ++k) {
    const double r = (k > 0 ? std::abs(off[k - 1]) : 0.0) + (k + 1 < m ? std::abs(off[k]) : 0.0);
    lo = std::min(lo, diag[k] - r);
    hi = std::max(hi, diag[k] + r);
  }
  lo -= 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(std::abs(hi), 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= mode.j) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double RadialSolver::fd_oracle_eigenvalue(const RadialMode& mode, double R, int gridpoints) const {
  const double coarse = fd_eigenvalue(mode, R, gridpoints);
  const double fine = fd_eigenvalue(mode, R, 2 * gridpoints);
  return (4.0 * fine - coarse) / 3.0;
}

double RadialSolver::wronskian_residual(const RadialEigenpair& f, const RadialEigenpair& g,
                                        double t) const {
  if (f.radius != g.radius || f.samples_t.size() != g.samples_t.size())
    fail(ErrorCode::Domain, "Wronskian needs eigenpairs on the same ball and grid");
  const double R = f.radius;
  if (!(t > 0.0) || t > R * (1 + 1e-12)) fail(ErrorCode::Domain, "Wronskian point outside (0, R]");
  const std::size_t N = f.samples_t.size();
  const double h = R / (N - 1);
  const std::size_t k = std::min<std::size_t>(N - 1, static_cast<std::size_t>(std::lround(t / h)));
  const int n = model_.dimension();
  const double alpha = f.eigenvalue, beta = g.eigenvalue;
  const double vf = f.mode.sphere_eigenvalue(n), vg = g.mode.sphere_eigenvalue(n);

  std::vector<double> integrand(k + 1), magnitude(k + 1);
  for (std::size_t i = 1; i <= k; ++i) {
    const double s = f.samples_t[i];
    const double S = s_raw(model_.kappa(), s);
    integrand[i] = (alpha - beta + (vg - vf) / (S * S)) * p(s) * f.samples_T[i] * g.samples_T[i];
    magnitude[i] = std::abs(integrand[i]);
  }
  if (k >= 2) {
    integrand[0] = 2 * integrand[1] - integrand[2];
    magnitude[0] = std::abs(integrand[0]);
  }
  const double rhs = simpson(integrand, h, k);
  const double scale_rhs = simpson(magnitude, h, k);
  const double tk = f.samples_t[k];
  const double lhs = p(tk) * (f.samples_T[k] * g.samples_Tprime[k] - f.samples_Tprime[k] * g.samples_T[k]);
  const double scale = std::max({std::abs(lhs), scale_rhs, 1e-300});
  return std::abs(lhs - rhs) / scale;
}

TrialValue trial_h(const RadialEigenpair& pair, double t) {
  if (!(t >= 0.0)) fail(ErrorCode::Domain, "trial function needs t >= 0");
  const double R = pair.radius;
  const std::size_t N = pair.samples_t.size();
  if (t >= R) return {pair.samples_T.back(), 0.0};
  const double h = R / (N - 1);
  std::size_t i = std::min<std::size_t>(N - 2, static_cast<std::size_t>(t / h));
  const double s = (t - pair.samples_t[i]) / h;
  const double y0 = pair.samples_T[i], y1 = pair.samples_T[i + 1];
  const double m0 = pair.samples_Tprime[i] * h, m1 = pair.samples_Tprime[i + 1] * h;
  const double s2 = s * s, s3 = s2 * s;
  const double value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
                       (s3 - s2) * m1;
  const double deriv =
      ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * m1) / h;
  return {value, deriv};
}

TrialMonotonicity check_trial_monotonicity(const RadialEigenpair& pair,
                                           const SpaceFormModel& model, double t_max,
                                           int samples) {
  TrialMonotonicity out;
  const int n = model.dimension();
  std::vector<double> hs, qs;
  for (int i = 1; i <= samples; ++i) {
    const double t = t_max * i / samples;
    const auto v = trial_h(pair, t);
    const double S = s_raw(model.kappa(), t);
    hs.push_back(v.h);
    qs.push_back(v.hprime * v.hprime + (n - 1) * v.h * v.h / (S * S));
  }
  const double hmax = *std::max_element(hs.begin(), hs.end());
  const double qmax = *std::max_element(qs.begin(), qs.end());
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double drop = (hs[i - 1] - hs[i]) / hmax;
    const double rise = (qs[i] - qs[i - 1]) / qmax;
    out.worst_h_drop = std::max(out.worst_h_drop, drop);
    out.worst_q_rise = std::max(out.worst_q_rise, rise);
  }
  out.h_non_decreasing = out.worst_h_drop <= 1e-10;
  out.q_non_increasing = out.worst_q_rise <= 1e-8;
  return out;
}

}  // namespace wlspec
