#pragma once

// Weighted Schwarz symmetrization of nonnegative P1 fields on planar domains.
//
// Superlevel volumes V(s) = |{f > s}|_phi are integrated exactly per
// triangle after clipping along the straight P1 level segment. The
// rearrangement f*(x) = psi(t(x)) lives on the centered ball of the same
// weighted volume; between consecutive levels psi is interpolated linearly
// in the enclosed ball volume, so flat pieces of f become flat pieces of psi
// and jumps of psi carry no energy.

#include <iosfwd>
#include <optional>
#include <vector>

#include "wlspec/fem.hpp"
#include "wlspec/weights.hpp"

namespace wlspec {

struct DistributionFunction {
  std::vector<double> levels;          // ascending, uniform on [0, sup f]
  std::vector<double> volumes;         // |{f > s}|_phi
  std::vector<double> volumes_closed;  // |{f >= s}|_phi (differs on plateaus)
  std::vector<double> radii;           // t(s): ball radius enclosing volumes[k]
  double total_volume = 0.0;           // |Omega|_phi
  double sup = 0.0;
};

struct RadialRearrangement {
  // Breakpoints of psi, ascending in t. Consecutive equal radii encode a
  // jump of psi; consecutive equal values encode a plateau.
  std::vector<double> radii_grid;
  std::vector<double> ball_volumes;  // weighted volume of B_t at each breakpoint
  std::vector<double> values;        // psi, non-increasing
  double radius = 0.0;               // matched ball radius R
  int num_levels = 0;
};

// |{f > s}|_phi for an arbitrary level s.
double superlevel_volume(const FemField& field, const SpaceFormModel& model,
                         const WeightProfile& profile, double s);

DistributionFunction distribution(const FemField& field, const SpaceFormModel& model,
                                  const WeightProfile& profile, int num_levels = 256);

RadialRearrangement rearrange(const FemField& field, const SpaceFormModel& model,
                              const WeightProfile& profile, int num_levels = 256);

// psi(t), right-continuous.
double evaluate(const RadialRearrangement& r, const SpaceFormModel& model,
                const WeightProfile& profile, double t);

// |{f* > s}|_phi on the ball.
double rearranged_superlevel_volume(const RadialRearrangement& r, const SpaceFormModel& model,
                                    const WeightProfile& profile, double s);

// |int_Omega f^2 - int_B (f*)^2| / int_Omega f^2, weighted.
double l2_identity_residual(const FemField& field, const RadialRearrangement& r,
                            const SpaceFormModel& model, const WeightProfile& profile);

struct EnergyComparison {
  double energy_domain = 0.0;  // f^T K f
  double energy_ball = 0.0;    // omega int psi'^2 S^{n-1} e^{-phi} dt
  bool hypotheses_met = true;
  std::string note;            // "hypotheses unmet: ..." when the class check fails
};

// When `required` is given the profile is checked against it on [0, R].
EnergyComparison energy_comparison(const FemField& field, const RadialRearrangement& r,
                                   const SpaceFormModel& model, const WeightProfile& profile,
                                   const std::optional<AdmissibilityClass>& required = std::nullopt);

// Largest relative disagreement |V(s) - V*(s)| / V(s) over `count` levels
// drawn uniformly from (0, sup f) with a fixed seed.
double equimeasurability_error(const FemField& field, const RadialRearrangement& r,
                               const SpaceFormModel& model, const WeightProfile& profile,
                               int count = 20, unsigned seed = 12345);

// Two-column CSV "t,psi" of the breakpoints.
void write_profile_csv(std::ostream& out, const RadialRearrangement& r);

}  // namespace wlspec
