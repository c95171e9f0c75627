#ifndef KINETIC_FLUID_HPP_
#define KINETIC_FLUID_HPP_

#include <functional>
#include <vector>

#include "kinetic/grid.hpp"
#include "kinetic/tableau.hpp"
#include "kinetic/transport.hpp"

namespace kinetic {

// Conserved macroscopic state (rho, rho u, E) with p = rho T and
// E = rho |u|^2 / 2 + d_v rho T / 2.
struct FluidState {
  int nx = 0;
  int dim = 1;
  std::vector<double> rho, mx, my, energy;

  FluidState() = default;
  FluidState(int nx_, int dim_)
      : nx(nx_), dim(dim_), rho(nx_, 0.0), mx(nx_, 0.0), my(nx_, 0.0), energy(nx_, 0.0) {}

  double temperature(int i) const {
    const double usq = (mx[i] * mx[i] + my[i] * my[i]) / (rho[i] * rho[i]);
    return (2.0 * energy[i] / rho[i] - usq) / dim;
  }
};

void validate(const FluidState& u);  // rho > 0, T > 0 everywhere

// Viscosity / conductivity closures paired with the kinetic collision
// frequency laws.
struct TransportCoefficients {
  enum class Law {
    PressureLaw,      // mu = p / ((1-nu) tau), kappa = (d+2)/2 p / tau
    RiemannMatched,   // mu = kappa = T / (0.9 pi)
    LaxMatched,       // mu = sqrt(T), kappa = 15/4 sqrt(T)
  };

  Law law = Law::PressureLaw;
  int dim = 2;
  double nu = 0.0;
  double mu_ref = 1.0;  // reference viscosity for PressureLaw's tau

  double mu(double rho, double T) const;
  double kappa(double rho, double T) const;
};

// -d/dx F(U) with F = (rho u1, rho u1 u + p e1, (E+p) u1); WENO
// reconstruction with componentwise local Lax-Friedrichs splitting.
FluidState euler_rhs(const FluidState& u, const SpatialGrid& sg, WenoOrder order);

// euler_rhs plus the viscous and heat-conduction terms scaled by eps;
// diffusion derivatives use fourth-order central differences.
FluidState ns_rhs(const FluidState& u, double eps, const TransportCoefficients& coeffs,
                  const SpatialGrid& sg, WenoOrder order);

// Largest signal speed |u1| + sqrt(gamma T), gamma = (d+2)/d.
double max_wave_speed(const FluidState& u);

// Largest diffusivity max(mu, kappa)/rho scaled by eps (0 for eps = 0).
double max_diffusivity(const FluidState& u, double eps, const TransportCoefficients& coeffs);

struct FluidControls {
  double cfl = 0.5;
  double visc_safety = 0.4;  // dt <= visc_safety dx^2 / (2 eps D)
  double t_end = 0.0;
};

using FluidRhs = std::function<FluidState(const FluidState&)>;
using FluidObserver = std::function<void(int step, double t, const FluidState&)>;

// Explicit RK driver with a wave-speed and diffusion limited step.
FluidState rk_solve(FluidState u0, const ButcherTable& table, const FluidRhs& rhs,
                    const SpatialGrid& sg, const FluidControls& controls, double eps,
                    const TransportCoefficients* coeffs = nullptr,
                    const FluidObserver& observer = {});

}  // namespace kinetic

#endif  // KINETIC_FLUID_HPP_
