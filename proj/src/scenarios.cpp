// SPDX-License-Identifier: Apache-2.0

#include "partflux/scenarios.hpp"

#include <cmath>
#include <utility>
#include "partflux/error.hpp"

namespace partflux
{

std::array<double, 2> RotatingVelocity(double x, double y)
{
  return {0.5 - y, x - 0.5};
}

double PatchSolution(double kappa1, double kappa2, int side, double x, double y, double t)
{
  if (side == 1)
  {
    return t * (x + 2.0 * y + 3.0);
  }
  const double a = kappa1 / kappa2;
  const double c = (kappa2 - kappa1) / (2.0 * kappa2);
  return t * (a * x + 2.0 * y + c + 3.0);
}

Scenario PatchScenario(double kappa1, double kappa2)
{
  Require(kappa1 > 0.0 && kappa2 > 0.0, ErrorKind::InvalidArgument,
          "diffusion coefficients must be positive");
  Scenario s;
  s.name = "patch";
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  const double a = kappa1 / kappa2;
  const double c = (kappa2 - kappa1) / (2.0 * kappa2);
  // u is spatially linear and div v = 0, so the diffusion term drops out and
  // f = du/dt + v . grad u.
  s.source = [a, c](int side, double x, double y, double t)
  {
    if (side == 1)
    {
      return (x + 2.0 * y + 3.0) + t * (2.0 * x - y - 0.5);
    }
    return (a * x + 2.0 * y + c + 3.0) + t * (a * (0.5 - y) + 2.0 * (x - 0.5));
  };
  s.boundary = [kappa1, kappa2](int side, double x, double y, double t)
  { return PatchSolution(kappa1, kappa2, side, x, y, t); };
  s.boundary_rate = [kappa1, kappa2](int side, double x, double y, double)
  { return PatchSolution(kappa1, kappa2, side, x, y, 1.0); };
  return s;
}

namespace
{

constexpr double kBodyRadius = 0.15;

double Radius(double x, double y, double xc, double yc)
{
  return std::hypot(x - xc, y - yc);
}

double Cone(double x, double y)
{
  const double r = Radius(x, y, 0.25, 0.25) / kBodyRadius;
  return r <= 1.0 ? 1.0 - r : 0.0;
}

// Compactly supported smooth hump, peak 1.
double SmoothHill(double x, double y)
{
  const double r = Radius(x, y, 0.75, 0.25) / kBodyRadius;
  return r <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * r)) : 0.0;
}

double SlottedCylinder(double x, double y)
{
  constexpr double xc = 0.25, yc = 0.75;
  if (Radius(x, y, xc, yc) > kBodyRadius)
  {
    return 0.0;
  }
  const bool in_slot = std::abs(x - xc) < 0.025 && y < yc + 0.1;
  return in_slot ? 0.0 : 1.0;
}

// Four concentric terraces, highest at the center.
double TerracedCylinder(double x, double y)
{
  const double r = Radius(x, y, 0.75, 0.75) / kBodyRadius;
  if (r > 1.0)
  {
    return 0.0;
  }
  if (r <= 0.25)
  {
    return 1.0;
  }
  if (r <= 0.5)
  {
    return 0.75;
  }
  if (r <= 0.75)
  {
    return 0.5;
  }
  return 0.25;
}

}  // namespace

double CombinationInitial(double x, double y)
{
  // Supports are disjoint, so the sum never exceeds 1.
  return Cone(x, y) + SmoothHill(x, y) + SlottedCylinder(x, y) + TerracedCylinder(x, y);
}

Scenario CombinationScenario(double kappa1, double kappa2)
{
  Require(kappa1 > 0.0 && kappa2 > 0.0, ErrorKind::InvalidArgument,
          "diffusion coefficients must be positive");
  Scenario s;
  s.name = "combination";
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  s.initial = [](int, double x, double y) { return CombinationInitial(x, y); };
  return s;
}

Scenario WithInitial(const Scenario &base, SpaceField initial, std::string name)
{
  Scenario s = base;
  s.initial = std::move(initial);
  s.name = std::move(name);
  return s;
}

double GaussianHill::operator()(double x, double y) const
{
  const double dx = x - x0, dy = y - y0;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

std::vector<GaussianHill> GaussianTrainingSet(const DomainSpec &spec, double spacing_factor,
                                              double width_factor)
{
  Require(spec.n >= 2 && spec.n % 2 == 0, ErrorKind::InvalidArgument,
          "grid size N must be a positive even integer");
  Require(spacing_factor > 0.0 && width_factor > 0.0, ErrorKind::InvalidArgument,
          "Gaussian spacing and width factors must be positive");
  const double spacing = spacing_factor * spec.h();
  const double sigma = width_factor * spec.h();
  std::vector<GaussianHill> hills;
  for (int j = 1; j * spacing < spec.x_interface - 1.0e-12; j++)
  {
    hills.push_back({j * spacing, 0.5, sigma});
  }
  return hills;
}

}  // namespace partflux
