#pragma once

// Radial weights phi(t), t = distance to the weight origin, together with
// sampled verification of the convexity/monotonicity classes the
// isoperimetric results are stated for.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace wlspec {

class WeightProfile {
public:
  using Fn = std::function<double(double)>;

  WeightProfile(std::string label, Fn eval, Fn d1, Fn d2, double domain_sup);

  double operator()(double t) const { return eval_(t); }
  double eval(double t) const { return eval_(t); }
  double d1(double t) const { return d1_(t); }
  double d2(double t) const { return d2_(t); }
  double domain_sup() const { return domain_sup_; }
  const std::string& label() const { return label_; }

  // Density e^{-phi(t)}.
  double density(double t) const;

private:
  std::string label_;
  Fn eval_, d1_, d2_;
  double domain_sup_;
};

// zero | linear_neg | quad_neg | exp_dec | log_cos
WeightProfile builtin_profile(const std::string& name, double parameter);

// Parses "name" or "name:parameter", e.g. "quad_neg:0.3".
WeightProfile parse_profile(const std::string& spec);

enum class Admissibility : std::uint32_t {
  None = 0,
  Concave = 1u << 0,
  StrictlyConcave = 1u << 1,
  Convex = 1u << 2,
  NonIncreasing = 1u << 3,
  BbmpConvexity = 1u << 4,
  LogCosHemisphere = 1u << 5,
};

struct AdmissibilityClass {
  std::uint32_t flags = 0;
  // Dimension used by the z^{1/n} substitution of the BBMP condition.
  int dimension = 2;

  AdmissibilityClass() = default;
  AdmissibilityClass(std::initializer_list<Admissibility> fs, int dim = 2);
  bool has(Admissibility a) const { return (flags & static_cast<std::uint32_t>(a)) != 0; }
  std::string describe() const;
};

struct AdmissibilityVerdict {
  bool pass = true;
  std::optional<double> witness;       // first violating t
  Admissibility failed = Admissibility::None;
  std::string detail;
};

std::string to_string(Admissibility a);

// Dense sampling on [0, t_max]. Throws a domain error when t_max exceeds the
// profile's domain.
AdmissibilityVerdict check_admissibility(const WeightProfile& profile,
                                         const AdmissibilityClass& required,
                                         int samples, double t_max);

// Largest relative disagreement between central differences and the supplied
// derivatives over `samples` points of (0, t_max).
struct DerivativeConsistency {
  double d1_error = 0.0;
  double d2_error = 0.0;
};
DerivativeConsistency derivative_consistency(const WeightProfile& profile, int samples,
                                             double t_max);

// Class the built-in profile is documented to satisfy.
AdmissibilityClass claimed_class(const std::string& builtin_name);

}  // namespace wlspec
