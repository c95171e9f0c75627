#ifndef KINETIC_GRID_HPP_
#define KINETIC_GRID_HPP_

#include <span>
#include <vector>

namespace kinetic {

enum class Boundary { Periodic, FreeFlow };

struct SpatialGrid {
  int nx = 0;
  double xmin = 0.0;
  double xmax = 1.0;
  Boundary boundary = Boundary::Periodic;

  double dx() const { return (xmax - xmin) / nx; }
  double node(int i) const { return xmin + i * dx(); }
};

// Uniform node-centered velocity grid, d_v in {1,2}. Nodes are midpoints of
// a uniform partition of [-vmax, vmax]^d_v so the set is symmetric about 0;
// the quadrature weight is (2 vmax / nper)^d_v for every node.
struct VelocityGrid {
  int dim = 1;
  int nper = 0;
  double vmax = 0.0;
  double weight = 0.0;
  std::vector<double> axis;  // per-axis nodes
  std::vector<double> vx;    // flattened first component per node
  std::vector<double> vy;    // flattened second component (zero for dim 1)

  int total() const { return static_cast<int>(vx.size()); }
};

VelocityGrid make_velocity_grid(int dim, int nper, double vmax);

// Discrete distribution, space-major: value(i, j) for space node i and
// velocity node j.
struct DistributionField {
  int nx = 0;
  int nv = 0;
  std::vector<double> values;

  DistributionField() = default;
  DistributionField(int nx_, int nv_) : nx(nx_), nv(nv_), values(static_cast<size_t>(nx_) * nv_, 0.0) {}

  double& operator()(int i, int j) { return values[static_cast<size_t>(i) * nv + j]; }
  double operator()(int i, int j) const { return values[static_cast<size_t>(i) * nv + j]; }
  double* row(int i) { return values.data() + static_cast<size_t>(i) * nv; }
  const double* row(int i) const { return values.data() + static_cast<size_t>(i) * nv; }
};

// Grid-indexed macroscopic fields. Tensors are stored as symmetric packs
// (xx, xy, yy); for d_v = 1 only the xx component is meaningful.
struct MacroFields {
  int nx = 0;
  int dim = 1;
  std::vector<double> rho, ux, uy, energy, temperature;
  std::vector<double> theta_xx, theta_xy, theta_yy;  // centered second moments / rho
  std::vector<double> sigma_xx, sigma_xy, sigma_yy;  // raw second moments <v (x) v f>
  std::vector<double> qx, qy;                        // heat flux

  MacroFields() = default;
  MacroFields(int nx_, int dim_);
};

// Conserved moments with phi = (1, v, |v|^2/2), plus stress tensor, raw
// second moments and heat flux; T from the trace relation. Throws
// NonPositiveDensity when rho <= 0 or T <= 0 at some node.
MacroFields moments(const DistributionField& f, const VelocityGrid& vg);

namespace ref {
MacroFields moments(const DistributionField& f, const VelocityGrid& vg);
}

// Unvalidated phi- and v(x)v-moments, usable on signed fields such as
// transport terms.
struct RawMoments {
  std::vector<double> density, momentum_x, momentum_y, energy;
  std::vector<double> sigma_xx, sigma_xy, sigma_yy;
};

RawMoments raw_moments(const DistributionField& f, const VelocityGrid& vg);

// Nested-node injection from a grid with exactly double resolution.
std::vector<double> restrict_to_coarse(const SpatialGrid& fine_grid, const SpatialGrid& coarse_grid,
                                       std::span<const double> fine_values);

// sum |a - b| / sum |b|; throws ZeroReference when the denominator vanishes.
double l1_rel_error(std::span<const double> a, std::span<const double> b);

bool all_finite(const DistributionField& f);

}  // namespace kinetic

#endif  // KINETIC_GRID_HPP_
