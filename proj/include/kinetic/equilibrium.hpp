#ifndef KINETIC_EQUILIBRIUM_HPP_
#define KINETIC_EQUILIBRIUM_HPP_

#include <functional>
#include <span>
#include <vector>

#include "kinetic/grid.hpp"

namespace kinetic {

// Symmetric d_v x d_v tensor as an (xx, xy, yy) pack; yy/xy are ignored for
// d_v = 1.
struct SymTensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

// Positive definiteness by leading minors (xx > 0, det > 0 for d_v = 2).
bool positive_definite(const SymTensor2& t, int dim);

// (1 - nu) T Id + nu Theta at node i.
SymTensor2 relaxation_tensor(const MacroFields& mac, int i, double nu);

// M(v) = rho / (2 pi T)^{d/2} exp(-|v-u|^2 / (2T)) over the velocity grid.
// Throws NonPhysicalState for rho <= 0 or T <= 0.
void maxwellian_node(double rho, double ux, double uy, double temperature, const VelocityGrid& vg,
                     double* out);

// Anisotropic Gaussian with a full temperature tensor; reduces to the
// Maxwellian when the tensor is isotropic. Throws TensorNotPD (carrying
// `node`) when the tensor is not positive definite.
void gaussian_node(double rho, double ux, double uy, const SymTensor2& tensor,
                   const VelocityGrid& vg, double* out, int node = -1);

DistributionField maxwellian_field(const MacroFields& mac, const VelocityGrid& vg);

// Gaussian with tensor (1-nu) T Id + nu Theta per node (nu = 0 gives the
// Maxwellian field).
DistributionField es_gaussian_field(const MacroFields& mac, double nu, const VelocityGrid& vg);

namespace ref {
DistributionField maxwellian_field(const MacroFields& mac, const VelocityGrid& vg);
DistributionField es_gaussian_field(const MacroFields& mac, double nu, const VelocityGrid& vg);
}  // namespace ref

// Orthogonal projection onto span{M, vM, |v|^2 M} in the M-weighted inner
// product, written with the explicit orthogonal-basis formula.
void project_equilibrium_node(std::span<const double> g, double rho, double ux, double uy,
                              double temperature, const VelocityGrid& vg, double* out);

DistributionField project_equilibrium(const DistributionField& g, const MacroFields& mac,
                                      const VelocityGrid& vg);

// Smooth initial macroscopic profile. When the analytic derivatives are
// provided the first-order correction uses them; otherwise the Maxwellian
// field is differentiated with fourth-order central differences.
struct InitialProfile {
  std::function<double(double)> rho;
  std::function<double(double)> ux;
  std::function<double(double)> temperature;
  std::function<double(double)> drho;  // optional (all three or none)
  std::function<double(double)> dux;
  std::function<double(double)> dtemperature;
  double uy = 0.0;

  bool analytic() const { return static_cast<bool>(drho); }
};

// f0 = M - (eps / tau) (I - Pi_M)(v_1 dM/dx): equilibrium data plus the
// first-order correction, moment-free by construction.
DistributionField well_prepared_init(const InitialProfile& profile, double eps,
                                     std::span<const double> tau, const VelocityGrid& vg,
                                     const SpatialGrid& sg);

// Scaled peculiar-velocity kernels at one node: A(V) = V (x) V - |V|^2/d Id
// and B(V) = V (|V|^2 - (d+2)) / 2 with V = (v-u)/sqrt(T).
struct PeculiarKernels {
  std::vector<double> a_xx, a_xy, a_yy;
  std::vector<double> b_x, b_y;
};

PeculiarKernels chapman_enskog_kernels(double ux, double uy, double temperature,
                                       const VelocityGrid& vg);

// First-order deviation (g - f) / eps.
DistributionField f1_diagnostic(const DistributionField& f, const DistributionField& g, double eps);

// Shear stress <f1 (v-u) (x) (v-u)> and heat flux <f1 (v-u) |v-u|^2> / 2,
// with u taken from mac.
struct FluxDiagnostics {
  std::vector<double> shear_xx, shear_xy, shear_yy;
  std::vector<double> heat_x, heat_y;
};

FluxDiagnostics nonequilibrium_fluxes(const DistributionField& f1, const MacroFields& mac,
                                      const VelocityGrid& vg);

}  // namespace kinetic

#endif  // KINETIC_EQUILIBRIUM_HPP_
