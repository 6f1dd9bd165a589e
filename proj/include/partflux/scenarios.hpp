// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_SCENARIOS_HPP
#define PARTFLUX_SCENARIOS_HPP

#include <array>
#include <functional>
#include <numbers>
#include <string>
#include <vector>
#include "partflux/mesh.hpp"

namespace partflux
{

// Fields take the subdomain index (1 or 2) so that piecewise data such as the kinked
// manufactured solution can be evaluated on either side of the interface.
using SpaceTimeField = std::function<double(int side, double x, double y, double t)>;
using SpaceField = std::function<double(int side, double x, double y)>;
using VelocityField = std::function<std::array<double, 2>(double x, double y)>;

// v = (0.5 - y, x - 0.5): one counterclockwise revolution about (0.5, 0.5) per 2 pi.
std::array<double, 2> RotatingVelocity(double x, double y);

// One instance of the transmission problem. Empty fields evaluate to zero and let the
// solvers skip the corresponding load terms.
struct Scenario
{
  std::string name;
  double kappa1 = 1.0e-3;
  double kappa2 = 1.0e-3;
  VelocityField velocity = RotatingVelocity;
  SpaceTimeField source;
  SpaceTimeField boundary;
  SpaceTimeField boundary_rate;  // analytic time derivative of the Dirichlet data
  SpaceField initial;
  double final_time = 2.0 * std::numbers::pi;

  double Kappa(int side) const { return side == 1 ? kappa1 : kappa2; }
};

// Piecewise linear in space, linear in time solution with a kink at x = 0.5 that
// satisfies both coupling conditions for any positive (kappa1, kappa2).
double PatchSolution(double kappa1, double kappa2, int side, double x, double y, double t);

// Manufactured source, boundary data and zero initial condition reproducing
// PatchSolution.
Scenario PatchScenario(double kappa1, double kappa2);

// Homogeneous data with the four-body initial condition (smooth hill, cone, slotted
// cylinder, terraced cylinder), one body per quadrant center.
Scenario CombinationScenario(double kappa1, double kappa2);

double CombinationInitial(double x, double y);

// Copy of `base` with a different initial condition.
Scenario WithInitial(const Scenario &base, SpaceField initial, std::string name);

struct GaussianHill
{
  double x0, y0, sigma;

  double operator()(double x, double y) const;
};

// Hills centered on y = 0.5 inside the left subdomain, spaced spacing_factor * h apart
// with standard deviation width_factor * h.
std::vector<GaussianHill> GaussianTrainingSet(const DomainSpec &spec,
                                              double spacing_factor = 2.0,
                                              double width_factor = 2.0);

}  // namespace partflux

#endif  // PARTFLUX_SCENARIOS_HPP
