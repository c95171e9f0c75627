#include "kinetic/grid.hpp"

#include <cmath>
#include <string>

#include "kinetic/errors.hpp"

namespace kinetic {

VelocityGrid make_velocity_grid(int dim, int nper, double vmax) {
  if (dim != 1 && dim != 2) throw NonPhysicalState("velocity dimension must be 1 or 2");
  if (nper <= 0 || vmax <= 0.0) throw NonPhysicalState("velocity grid needs nper > 0, vmax > 0");
  VelocityGrid vg;
  vg.dim = dim;
  vg.nper = nper;
  vg.vmax = vmax;
  const double dv = 2.0 * vmax / nper;
  vg.weight = (dim == 1) ? dv : dv * dv;
  vg.axis.resize(nper);
  for (int a = 0; a < nper; ++a) vg.axis[a] = -vmax + (a + 0.5) * dv;
  // Enforce exact symmetry about 0.
  for (int a = 0; a < nper / 2; ++a) vg.axis[nper - 1 - a] = -vg.axis[a];
  if (nper % 2 == 1) vg.axis[nper / 2] = 0.0;
  if (dim == 1) {
    vg.vx = vg.axis;
    vg.vy.assign(nper, 0.0);
  } else {
    vg.vx.resize(static_cast<size_t>(nper) * nper);
    vg.vy.resize(static_cast<size_t>(nper) * nper);
    for (int a = 0; a < nper; ++a)
      for (int b = 0; b < nper; ++b) {
        vg.vx[static_cast<size_t>(a) * nper + b] = vg.axis[a];
        vg.vy[static_cast<size_t>(a) * nper + b] = vg.axis[b];
      }
  }
  return vg;
}

MacroFields::MacroFields(int nx_, int dim_)
    : nx(nx_),
      dim(dim_),
      rho(nx_, 0.0),
      ux(nx_, 0.0),
      uy(nx_, 0.0),
      energy(nx_, 0.0),
      temperature(nx_, 0.0),
      theta_xx(nx_, 0.0),
      theta_xy(nx_, 0.0),
      theta_yy(nx_, 0.0),
      sigma_xx(nx_, 0.0),
      sigma_xy(nx_, 0.0),
      sigma_yy(nx_, 0.0),
      qx(nx_, 0.0),
      qy(nx_, 0.0) {}

namespace {

// Raw and centered moments at one space node. Sequential accumulation in
// velocity-node order keeps results independent of the thread count.
inline void moments_at_node(const double* f, const VelocityGrid& vg, int i, MacroFields& out) {
  const int nv = vg.total();
  double s0 = 0.0, s1x = 0.0, s1y = 0.0, se = 0.0;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int j = 0; j < nv; ++j) {
    const double fj = f[j];
    const double vx = vg.vx[j];
    const double vy = vg.vy[j];
    s0 += fj;
    s1x += fj * vx;
    s1y += fj * vy;
    se += fj * (vx * vx + vy * vy);
    sxx += fj * vx * vx;
    sxy += fj * vx * vy;
    syy += fj * vy * vy;
  }
  const double w = vg.weight;
  const double rho = w * s0;
  if (!(rho > 0.0))
    throw NonPositiveDensity("non-positive density at space node " + std::to_string(i));
  const double mx = w * s1x;
  const double my = w * s1y;
  const double energy = 0.5 * w * se;
  const double ux = mx / rho;
  const double uy = my / rho;
  const double usq = ux * ux + uy * uy;
  const double temperature = (2.0 * energy / rho - usq) / vg.dim;
  if (!(temperature > 0.0))
    throw NonPositiveDensity("non-positive temperature at space node " + std::to_string(i));

  // Centered pass for the stress tensor and heat flux.
  double cxx = 0.0, cxy = 0.0, cyy = 0.0, cqx = 0.0, cqy = 0.0;
  for (int j = 0; j < nv; ++j) {
    const double fj = f[j];
    const double dx = vg.vx[j] - ux;
    const double dy = vg.vy[j] - uy;
    const double csq = dx * dx + dy * dy;
    cxx += fj * dx * dx;
    cxy += fj * dx * dy;
    cyy += fj * dy * dy;
    cqx += fj * dx * csq;
    cqy += fj * dy * csq;
  }
  out.rho[i] = rho;
  out.ux[i] = ux;
  out.uy[i] = uy;
  out.energy[i] = energy;
  out.temperature[i] = temperature;
  out.theta_xx[i] = w * cxx / rho;
  out.theta_xy[i] = w * cxy / rho;
  out.theta_yy[i] = w * cyy / rho;
  out.sigma_xx[i] = w * sxx;
  out.sigma_xy[i] = w * sxy;
  out.sigma_yy[i] = w * syy;
  out.qx[i] = 0.5 * w * cqx;
  out.qy[i] = 0.5 * w * cqy;
}

}  // namespace

MacroFields moments(const DistributionField& f, const VelocityGrid& vg) {
  MacroFields out(f.nx, vg.dim);
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < f.nx; ++i) {
    try {
      moments_at_node(f.row(i), vg, i, out);
    } catch (const Error& e) {
#pragma omp critical
      {
        failed = true;
        message = e.what();
      }
    }
  }
  if (failed) throw NonPositiveDensity(message);
  return out;
}

namespace ref {

MacroFields moments(const DistributionField& f, const VelocityGrid& vg) {
  MacroFields out(f.nx, vg.dim);
  for (int i = 0; i < f.nx; ++i) moments_at_node(f.row(i), vg, i, out);
  return out;
}

}  // namespace ref

RawMoments raw_moments(const DistributionField& f, const VelocityGrid& vg) {
  RawMoments out;
  out.density.assign(f.nx, 0.0);
  out.momentum_x.assign(f.nx, 0.0);
  out.momentum_y.assign(f.nx, 0.0);
  out.energy.assign(f.nx, 0.0);
  out.sigma_xx.assign(f.nx, 0.0);
  out.sigma_xy.assign(f.nx, 0.0);
  out.sigma_yy.assign(f.nx, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < f.nx; ++i) {
    const double* row = f.row(i);
    double s0 = 0.0, s1x = 0.0, s1y = 0.0, se = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int j = 0; j < f.nv; ++j) {
      const double fj = row[j];
      const double vx = vg.vx[j];
      const double vy = vg.vy[j];
      s0 += fj;
      s1x += fj * vx;
      s1y += fj * vy;
      se += fj * (vx * vx + vy * vy);
      sxx += fj * vx * vx;
      sxy += fj * vx * vy;
      syy += fj * vy * vy;
    }
    const double w = vg.weight;
    out.density[i] = w * s0;
    out.momentum_x[i] = w * s1x;
    out.momentum_y[i] = w * s1y;
    out.energy[i] = 0.5 * w * se;
    out.sigma_xx[i] = w * sxx;
    out.sigma_xy[i] = w * sxy;
    out.sigma_yy[i] = w * syy;
  }
  return out;
}

std::vector<double> restrict_to_coarse(const SpatialGrid& fine_grid, const SpatialGrid& coarse_grid,
                                       std::span<const double> fine_values) {
  if (fine_grid.xmin != coarse_grid.xmin || fine_grid.xmax != coarse_grid.xmax)
    throw IncompatibleGrids("grid extents differ");
  if (fine_grid.nx != 2 * coarse_grid.nx)
    throw IncompatibleGrids("fine grid must have exactly double resolution");
  if (fine_values.size() != static_cast<size_t>(fine_grid.nx))
    throw IncompatibleGrids("field size does not match fine grid");
  std::vector<double> coarse(coarse_grid.nx);
  for (int i = 0; i < coarse_grid.nx; ++i) coarse[i] = fine_values[2 * static_cast<size_t>(i)];
  return coarse;
}

double l1_rel_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw IncompatibleGrids("fields have different sizes");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::abs(a[i] - b[i]);
    den += std::abs(b[i]);
  }
  if (den == 0.0) throw ZeroReference("reference field has zero L1 norm");
  return num / den;
}

bool all_finite(const DistributionField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace kinetic
