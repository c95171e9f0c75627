#ifndef KINETIC_EXPERIMENTS_HPP_
#define KINETIC_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "kinetic/equilibrium.hpp"
#include "kinetic/fluid.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/imex.hpp"

namespace kinetic {

// ---------------------------------------------------------------------------
// Accuracy sweeps (smooth-wave convergence tables)

struct AccuracyRow {
  int nx = 0;  // the coarse grid of the (N, 2N) pair
  double eps = 0.0;
  double l1 = 0.0;
  double order = 0.0;  // NaN on the first row of a sweep
};

struct AccuracyConfig {
  int test = 1;  // 1: relaxation toward the isotropic equilibrium in 1V,
                 // 2: anisotropic model in 2V with nu = -1/2
  std::string scheme = "isa3";
  double eps = 1.0;
  std::vector<int> grids = {40, 80, 160, 320, 640, 1280};
  int nv = 0;  // 0 = per-test default
  double cfl = 0.9;
  double t_end = 0.25;
};

// The smooth-wave initial profile shared by the accuracy tests:
// rho = 1 + 0.2 sin(pi x), u1 = 1, T = 1/rho on [0, 2], with analytic
// derivatives for the first-order initial correction.
InitialProfile smooth_wave_profile();

std::vector<AccuracyRow> accuracy_sweep(const AccuracyConfig& config);

void write_accuracy_csv(const std::string& path, const std::vector<AccuracyRow>& rows);

// ---------------------------------------------------------------------------
// Riemann problem (2V, free-flow)

struct RiemannConfig {
  double eps = 0.5;
  int nx = 200;
  int nv = 64;
  double cfl = 0.5;
  std::string scheme = "isa3";
  std::vector<double> times = {0.1, 0.15, 0.2, 0.25, 0.4};
  int ref_nx = 800;
  std::string cache_dir;  // reference cache location ("" = no cache)
};

struct KineticSnapshot {
  double time = 0.0;
  MacroFields mac;
  FluxDiagnostics fluxes;  // first-order deviation moments (shear / heat)
};

struct RiemannResult {
  SpatialGrid grid;
  std::vector<KineticSnapshot> kinetic;    // one per requested time
  SpatialGrid ref_grid;
  std::vector<FluidState> ns_reference;    // one per requested time
};

RiemannResult riemann_test(const RiemannConfig& config);

// ---------------------------------------------------------------------------
// Lax shock tube (2V, free-flow) with closure diagnostics

struct LaxConfig {
  double eps = 1e-4;
  int nx = 200;
  int nv = 80;
  double cfl = 0.2;
  double t_end = 1.3;
  std::string scheme = "isa3";
  int ref_nx = 3200;
  std::string cache_dir;
};

struct LaxResult {
  SpatialGrid grid;
  KineticSnapshot kinetic;
  // First-order stress / heat flux from the kinetic deviation moments:
  // -<(G-f)/eps cc>/(1-nu) and -<(G-f)/eps c|c|^2>/2, which estimate
  // -mu sigma(u) and -kappa dT/dx.
  std::vector<double> shear_kinetic, heat_kinetic;
  // Constitutive closure evaluated on the kinetic macro fields.
  std::vector<double> shear_macro, heat_macro;
  SpatialGrid ref_grid;
  FluidState ns_reference;
  FluidState euler_reference;
  // The same closure evaluated on the viscous reference fields.
  std::vector<double> shear_ns, heat_ns;
};

LaxResult lax_test(const LaxConfig& config);

// Constitutive curves -mu sigma_11(u) and -kappa dT/dx with the model's
// viscosity mu = p/((1-nu) tau) and conductivity kappa = (d+2)/2 p/tau.
void model_closure_curves(const std::vector<double>& rho, const std::vector<double>& u1,
                          const std::vector<double>& temperature, const ModelConfig& cfg, int dim,
                          const SpatialGrid& sg, std::vector<double>& shear,
                          std::vector<double>& heat);

void write_profile_csv(const std::string& path, const SpatialGrid& sg, const MacroFields& mac);

// Full macroscopic dump: x, rho, u, E, T, the stress tensor pack and the
// heat flux (vector components only for d_v = 2).
void write_macro_csv(const std::string& path, const SpatialGrid& sg, const MacroFields& mac);

void write_fluid_profile_csv(const std::string& path, const SpatialGrid& sg, const FluidState& u);

// ---------------------------------------------------------------------------
// Homogeneous relaxation order study

struct RelaxOrderResult {
  double eps = 0.0;
  std::vector<double> dts;
  std::vector<double> errors;
  std::vector<double> orders;  // one fewer than errors
};

RelaxOrderResult relaxation_order_study(const std::string& scheme, double eps,
                                        const std::vector<double>& dts, double t_end);

// Macroscopic reference solve for the shock problems; eps = 0 gives the
// inviscid reference. Results are cached to CSV when cache_dir is set.
FluidState shock_reference(const std::string& test, double eps, int ref_nx, double t_end,
                           const TransportCoefficients& coeffs, const SpatialGrid& ref_grid,
                           const FluidState& u0, WenoOrder order, const std::string& cache_dir);

// Stride injection onto a coarser nested grid (ref_nx = k * nx).
std::vector<double> inject_to_grid(const std::vector<double>& fine, int coarse_nx);

}  // namespace kinetic

#endif  // KINETIC_EXPERIMENTS_HPP_
