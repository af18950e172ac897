#include "wlspec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

constexpr double kSignTol = 1e-9;

bool flagged(std::uint32_t flags, Admissibility a) {
  return (flags & static_cast<std::uint32_t>(a)) != 0;
}

std::string format_param(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

WeightProfile::WeightProfile(std::string label, Fn eval, Fn d1, Fn d2, double domain_sup)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      domain_sup_(domain_sup) {
  if (!eval_ || !d1_ || !d2_) fail(ErrorCode::Domain, "weight profile needs phi, phi' and phi''");
  if (!(domain_sup_ > 0.0)) fail(ErrorCode::Domain, "weight domain must be non-empty");
}

double WeightProfile::density(double t) const { return std::exp(-eval_(t)); }

WeightProfile builtin_profile(const std::string& name, double parameter) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto need_positive = [&] {
    if (!(parameter > 0.0) || !std::isfinite(parameter))
      fail(ErrorCode::Domain, "weight '" + name + "' needs a positive parameter");
  };
  if (name == "zero") {
    auto z = [](double) { return 0.0; };
    return {"zero", z, z, z, inf};
  }
  if (name == "linear_neg") {
    need_positive();
    const double a = parameter;
    return {"linear_neg:" + format_param(a), [a](double t) { return -a * t; },
            [a](double) { return -a; }, [](double) { return 0.0; }, inf};
  }
  if (name == "quad_neg") {
    need_positive();
    const double c = parameter;
    return {"quad_neg:" + format_param(c), [c](double t) { return -c * t * t; },
            [c](double t) { return -2.0 * c * t; }, [c](double) { return -2.0 * c; }, inf};
  }
  if (name == "exp_dec") {
    need_positive();
    const double a = parameter;
    std::string label = a == 1.0 ? "exp_dec" : "exp_dec:" + format_param(a);
    return {label, [a](double t) { return std::exp(-a * t); },
            [a](double t) { return -a * std::exp(-a * t); },
            [a](double t) { return a * a * std::exp(-a * t); }, inf};
  }
  if (name == "log_cos") {
    return {"log_cos", [](double t) { return -std::log(std::cos(t)); },
            [](double t) { return std::tan(t); },
            [](double t) {
              const double c = std::cos(t);
              return 1.0 / (c * c);
            },
            std::numbers::pi / 2};
  }
  fail(ErrorCode::Domain, "unknown weight profile '" + name + "'");
}

WeightProfile parse_profile(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  double param = 1.0;
  if (colon != std::string::npos) {
    const std::string rest = spec.substr(colon + 1);
    char* end = nullptr;
    param = std::strtod(rest.c_str(), &end);
    if (rest.empty() || end != rest.c_str() + rest.size())
      fail(ErrorCode::Domain, "malformed weight parameter in '" + spec + "'");
  }
  return builtin_profile(name, param);
}

AdmissibilityClass::AdmissibilityClass(std::initializer_list<Admissibility> fs, int dim)
    : dimension(dim) {
  for (auto f : fs) flags |= static_cast<std::uint32_t>(f);
  if (has(Admissibility::StrictlyConcave)) flags |= static_cast<std::uint32_t>(Admissibility::Concave);
}

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::None: return "none";
    case Admissibility::Concave: return "concave";
    case Admissibility::StrictlyConcave: return "strictly_concave";
    case Admissibility::Convex: return "convex";
    case Admissibility::NonIncreasing: return "non_increasing";
    case Admissibility::BbmpConvexity: return "bbmp_convexity";
    case Admissibility::LogCosHemisphere: return "log_cos_hemisphere";
  }
  return "?";
}

std::string AdmissibilityClass::describe() const {
  std::string out;
  for (auto a : {Admissibility::Concave, Admissibility::StrictlyConcave, Admissibility::Convex,
                 Admissibility::NonIncreasing, Admissibility::BbmpConvexity,
                 Admissibility::LogCosHemisphere}) {
    if (!has(a)) continue;
    if (!out.empty()) out += '+';
    out += to_string(a);
  }
  return out.empty() ? "none" : out;
}

AdmissibilityVerdict check_admissibility(const WeightProfile& profile,
                                         const AdmissibilityClass& required, int samples,
                                         double t_max) {
  if (samples < 10) fail(ErrorCode::Domain, "admissibility check needs at least 10 samples");
  if (!(t_max > 0.0) || t_max > profile.domain_sup())
    fail(ErrorCode::Domain, "sampling range exceeds the domain of weight " + profile.label());

  const bool open_end = t_max >= profile.domain_sup();
  std::vector<double> ts(samples);
  for (int i = 0; i < samples; ++i) {
    const double denom = open_end ? samples : samples - 1;
    ts[i] = t_max * i / denom;
  }

  auto violation = [](Admissibility a, double t, std::string why) {
    AdmissibilityVerdict v;
    v.pass = false;
    v.witness = t;
    v.failed = a;
    v.detail = std::move(why);
    return v;
  };

  const std::uint32_t f = required.flags;
  for (double t : ts) {
    const double d1 = profile.d1(t), d2 = profile.d2(t);
    if (flagged(f, Admissibility::StrictlyConcave) && !(d2 <= -kSignTol))
      return violation(Admissibility::StrictlyConcave, t, "phi'' not uniformly negative");
    if (flagged(f, Admissibility::Concave) && !(d2 <= kSignTol))
      return violation(Admissibility::Concave, t, "phi'' positive");
    if (flagged(f, Admissibility::Convex) && !(d2 >= -kSignTol))
      return violation(Admissibility::Convex, t, "phi'' negative");
    if (flagged(f, Admissibility::NonIncreasing) && !(d1 <= kSignTol))
      return violation(Admissibility::NonIncreasing, t, "phi' positive");
    if (flagged(f, Admissibility::LogCosHemisphere)) {
      const double expect = -std::log(std::cos(t));
      if (!(std::abs(profile(t) - expect) <= 1e-12 * std::max(1.0, std::abs(expect))))
        return violation(Admissibility::LogCosHemisphere, t, "phi differs from -log cos t");
    }
  }

  if (flagged(f, Admissibility::BbmpConvexity)) {
    // g(z) = (e^{-phi(z^{1/n})} - e^{-phi(0)}) z^{1-1/n} on a geometric z-grid.
    const double n = required.dimension;
    const double z_max = std::pow(t_max, n) * (open_end ? 0.999 : 1.0);
    const double z_min = z_max * 1e-8;
    const double e0 = profile.density(0.0);
    auto g = [&](double z) { return (profile.density(std::pow(z, 1.0 / n)) - e0) * std::pow(z, 1.0 - 1.0 / n); };
    std::vector<double> zs(samples), gs(samples);
    const double ratio = std::pow(z_max / z_min, 1.0 / (samples - 1));
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
      zs[i] = z_min * std::pow(ratio, i);
      gs[i] = g(zs[i]);
      scale = std::max(scale, std::abs(gs[i]) / zs[i]);
    }
    for (int i = 1; i + 1 < samples; ++i) {
      const double left = (gs[i] - gs[i - 1]) / (zs[i] - zs[i - 1]);
      const double right = (gs[i + 1] - gs[i]) / (zs[i + 1] - zs[i]);
      if (right - left < -kSignTol * std::max(1.0, scale))
        return violation(Admissibility::BbmpConvexity, std::pow(zs[i], 1.0 / n),
                         "z -> (e^{-phi(z^{1/n})} - e^{-phi(0)}) z^{1-1/n} not convex");
    }
  }
  return {};
}

DerivativeConsistency derivative_consistency(const WeightProfile& profile, int samples,
                                             double t_max) {
  DerivativeConsistency out;
  const double hi = std::min(t_max, profile.domain_sup());
  for (int i = 1; i <= samples; ++i) {
    const double t = hi * i / (samples + 1.0);
    const double h = 1e-4 * std::max(1e-3, std::min(t, hi - t));
    const double fd1 = (profile(t + h) - profile(t - h)) / (2 * h);
    const double fd2 = (profile.d1(t + h) - profile.d1(t - h)) / (2 * h);
    const double s1 = std::max({std::abs(profile.d1(t)), std::abs(profile(t)), 1e-3});
    const double s2 = std::max({std::abs(profile.d2(t)), std::abs(profile.d1(t)), 1e-3});
    out.d1_error = std::max(out.d1_error, std::abs(fd1 - profile.d1(t)) / s1);
    out.d2_error = std::max(out.d2_error, std::abs(fd2 - profile.d2(t)) / s2);
  }
  return out;
}

AdmissibilityClass claimed_class(const std::string& name) {
  using A = Admissibility;
  if (name == "zero") return {A::Concave, A::Convex, A::NonIncreasing, A::BbmpConvexity};
  if (name == "linear_neg") return {A::Concave, A::Convex, A::NonIncreasing, A::BbmpConvexity};
  if (name == "quad_neg") return {A::StrictlyConcave, A::NonIncreasing, A::BbmpConvexity};
  if (name == "exp_dec") return {A::NonIncreasing, A::Convex};
  if (name == "log_cos") return {A::LogCosHemisphere, A::Convex};
  fail(ErrorCode::Domain, "unknown weight profile '" + name + "'");
}

}  // namespace wlspec
