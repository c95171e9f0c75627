#include "kinetic/equilibrium.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kinetic/errors.hpp"
#include "kinetic/transport.hpp"

namespace kinetic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative cross-term threshold below which the 2D Gaussian is evaluated as
// a product of per-axis factors (two 1D exp tables instead of nper^2 calls).
constexpr double kSeparableTol = 1e-15;

}  // namespace

bool positive_definite(const SymTensor2& t, int dim) {
  if (dim == 1) return t.xx > 0.0;
  return t.xx > 0.0 && t.xx * t.yy - t.xy * t.xy > 0.0;
}

SymTensor2 relaxation_tensor(const MacroFields& mac, int i, double nu) {
  const double T = mac.temperature[i];
  SymTensor2 t;
  t.xx = (1.0 - nu) * T + nu * mac.theta_xx[i];
  if (mac.dim == 2) {
    t.xy = nu * mac.theta_xy[i];
    t.yy = (1.0 - nu) * T + nu * mac.theta_yy[i];
  }
  return t;
}

void maxwellian_node(double rho, double ux, double uy, double temperature, const VelocityGrid& vg,
                     double* out) {
  if (!(rho > 0.0) || !(temperature > 0.0))
    throw NonPhysicalState("Maxwellian needs rho > 0 and T > 0");
  SymTensor2 iso{temperature, 0.0, temperature};
  gaussian_node(rho, ux, uy, iso, vg, out);
}

void gaussian_node(double rho, double ux, double uy, const SymTensor2& tensor,
                   const VelocityGrid& vg, double* out, int node) {
  if (!(rho > 0.0)) throw NonPhysicalState("Gaussian needs rho > 0");
  if (!positive_definite(tensor, vg.dim))
    throw TensorNotPD("temperature tensor not positive definite at node " + std::to_string(node),
                      node);
  const int nv = vg.total();
  if (vg.dim == 1) {
    const double norm = rho / std::sqrt(kTwoPi * tensor.xx);
    const double inv2t = 0.5 / tensor.xx;
    for (int j = 0; j < nv; ++j) {
      const double dx = vg.vx[j] - ux;
      out[j] = norm * std::exp(-dx * dx * inv2t);
    }
    return;
  }
  const double det = tensor.xx * tensor.yy - tensor.xy * tensor.xy;
  const double norm = rho / (kTwoPi * std::sqrt(det));
  if (std::abs(tensor.xy) <= kSeparableTol * std::max(tensor.xx, tensor.yy)) {
    const int n = vg.nper;
    std::vector<double> ex(n), ey(n);
    const double ax = 0.5 * tensor.yy / det;
    const double ay = 0.5 * tensor.xx / det;
    for (int a = 0; a < n; ++a) {
      const double dx = vg.axis[a] - ux;
      const double dy = vg.axis[a] - uy;
      ex[a] = std::exp(-ax * dx * dx);
      ey[a] = std::exp(-ay * dy * dy);
    }
    for (int a = 0; a < n; ++a) {
      const double fx = norm * ex[a];
      double* row = out + static_cast<size_t>(a) * n;
      for (int b = 0; b < n; ++b) row[b] = fx * ey[b];
    }
    return;
  }
  const double ixx = tensor.yy / det;
  const double ixy = -tensor.xy / det;
  const double iyy = tensor.xx / det;
  for (int j = 0; j < nv; ++j) {
    const double dx = vg.vx[j] - ux;
    const double dy = vg.vy[j] - uy;
    const double q = ixx * dx * dx + 2.0 * ixy * dx * dy + iyy * dy * dy;
    out[j] = norm * std::exp(-0.5 * q);
  }
}

namespace {

template <bool Anisotropic>
DistributionField equilibrium_field_impl(const MacroFields& mac, double nu, const VelocityGrid& vg,
                                         bool parallel) {
  DistributionField g(mac.nx, vg.total());
  bool failed = false;
  std::string message;
  int bad_node = -1;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < mac.nx; ++i) {
    try {
      if constexpr (Anisotropic) {
        gaussian_node(mac.rho[i], mac.ux[i], mac.uy[i], relaxation_tensor(mac, i, nu), vg, g.row(i),
                      i);
      } else {
        maxwellian_node(mac.rho[i], mac.ux[i], mac.uy[i], mac.temperature[i], vg, g.row(i));
      }
    } catch (const TensorNotPD& e) {
#pragma omp critical
      {
        failed = true;
        message = e.what();
        bad_node = e.node();
      }
    } catch (const Error& e) {
#pragma omp critical
      {
        failed = true;
        message = e.what();
        bad_node = i;
      }
    }
  }
  if (failed) throw TensorNotPD(message, bad_node);
  return g;
}

}  // namespace

DistributionField maxwellian_field(const MacroFields& mac, const VelocityGrid& vg) {
  return equilibrium_field_impl<false>(mac, 0.0, vg, true);
}

DistributionField es_gaussian_field(const MacroFields& mac, double nu, const VelocityGrid& vg) {
  return equilibrium_field_impl<true>(mac, nu, vg, true);
}

namespace ref {

DistributionField maxwellian_field(const MacroFields& mac, const VelocityGrid& vg) {
  return equilibrium_field_impl<false>(mac, 0.0, vg, false);
}

DistributionField es_gaussian_field(const MacroFields& mac, double nu, const VelocityGrid& vg) {
  return equilibrium_field_impl<true>(mac, nu, vg, false);
}

}  // namespace ref

void project_equilibrium_node(std::span<const double> g, double rho, double ux, double uy,
                              double temperature, const VelocityGrid& vg, double* out) {
  if (!(rho > 0.0) || !(temperature > 0.0))
    throw NonPhysicalState("projection needs an admissible state");
  const int nv = vg.total();
  const double invT = 1.0 / temperature;
  double m0 = 0.0, m1x = 0.0, m1y = 0.0, me = 0.0;
  for (int j = 0; j < nv; ++j) {
    const double dx = vg.vx[j] - ux;
    const double dy = vg.vy[j] - uy;
    const double h = 0.5 * (dx * dx + dy * dy) * invT - 0.5 * vg.dim;
    m0 += g[j];
    m1x += g[j] * dx;
    m1y += g[j] * dy;
    me += g[j] * h;
  }
  const double w = vg.weight;
  m0 *= w;
  m1x *= w;
  m1y *= w;
  me *= w * 2.0 / vg.dim;

  std::vector<double> emax(nv);
  maxwellian_node(rho, ux, uy, temperature, vg, emax.data());
  const double invrho = 1.0 / rho;
  for (int j = 0; j < nv; ++j) {
    const double dx = vg.vx[j] - ux;
    const double dy = vg.vy[j] - uy;
    const double h = 0.5 * (dx * dx + dy * dy) * invT - 0.5 * vg.dim;
    out[j] = emax[j] * invrho * (m0 + (dx * m1x + dy * m1y) * invT + h * me);
  }
}

DistributionField project_equilibrium(const DistributionField& g, const MacroFields& mac,
                                      const VelocityGrid& vg) {
  DistributionField out(g.nx, g.nv);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.nx; ++i) {
    project_equilibrium_node(std::span<const double>(g.row(i), g.nv), mac.rho[i], mac.ux[i],
                             mac.uy[i], mac.temperature[i], vg, out.row(i));
  }
  return out;
}

namespace {

// dM/dx from the profile's analytic derivatives:
// dM/dx = M [ rho'/rho + (v-u).u'/T + (|v-u|^2/(2T) - d/2) T'/T ].
void maxwellian_x_derivative_node(const InitialProfile& p, double x, const VelocityGrid& vg,
                                  double* out) {
  const double rho = p.rho(x), ux = p.ux(x), T = p.temperature(x);
  const double drho = p.drho(x), dux = p.dux(x), dT = p.dtemperature(x);
  std::vector<double> emax(vg.total());
  maxwellian_node(rho, ux, p.uy, T, vg, emax.data());
  const double invT = 1.0 / T;
  for (int j = 0; j < vg.total(); ++j) {
    const double dx = vg.vx[j] - ux;
    const double dy = vg.vy[j] - p.uy;
    const double h = 0.5 * (dx * dx + dy * dy) * invT - 0.5 * vg.dim;
    out[j] = emax[j] * (drho / rho + dx * dux * invT + h * dT * invT);
  }
}

}  // namespace

DistributionField well_prepared_init(const InitialProfile& profile, double eps,
                                     std::span<const double> tau, const VelocityGrid& vg,
                                     const SpatialGrid& sg) {
  const int nv = vg.total();
  DistributionField f(sg.nx, nv);
  MacroFields mac(sg.nx, vg.dim);
  for (int i = 0; i < sg.nx; ++i) {
    const double x = sg.node(i);
    mac.rho[i] = profile.rho(x);
    mac.ux[i] = profile.ux(x);
    mac.uy[i] = profile.uy;
    mac.temperature[i] = profile.temperature(x);
  }

  DistributionField dmdx(sg.nx, nv);
  if (profile.analytic()) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < sg.nx; ++i)
      maxwellian_x_derivative_node(profile, sg.node(i), vg, dmdx.row(i));
  } else {
    DistributionField emax = maxwellian_field(mac, vg);
    dmdx = central_x_derivative(emax, sg);
  }

  if (eps == 0.0) return maxwellian_field(mac, vg);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < sg.nx; ++i) {
    std::vector<double> h(nv), ph(nv);
    for (int j = 0; j < nv; ++j) h[j] = vg.vx[j] * dmdx(i, j);
    project_equilibrium_node(h, mac.rho[i], mac.ux[i], mac.uy[i], mac.temperature[i], vg,
                             ph.data());
    std::vector<double> emax(nv);
    maxwellian_node(mac.rho[i], mac.ux[i], mac.uy[i], mac.temperature[i], vg, emax.data());
    const double scale = eps / tau[i];
    for (int j = 0; j < nv; ++j) f(i, j) = emax[j] - scale * (h[j] - ph[j]);
  }
  return f;
}

PeculiarKernels chapman_enskog_kernels(double ux, double uy, double temperature,
                                       const VelocityGrid& vg) {
  if (!(temperature > 0.0)) throw NonPhysicalState("kernels need T > 0");
  const int nv = vg.total();
  PeculiarKernels k;
  k.a_xx.resize(nv);
  k.a_xy.resize(nv);
  k.a_yy.resize(nv);
  k.b_x.resize(nv);
  k.b_y.resize(nv);
  const double isqt = 1.0 / std::sqrt(temperature);
  for (int j = 0; j < nv; ++j) {
    const double wx = (vg.vx[j] - ux) * isqt;
    const double wy = (vg.vy[j] - uy) * isqt;
    const double wsq = wx * wx + wy * wy;
    k.a_xx[j] = wx * wx - wsq / vg.dim;
    k.a_xy[j] = wx * wy;
    k.a_yy[j] = wy * wy - wsq / vg.dim;
    k.b_x[j] = 0.5 * wx * (wsq - (vg.dim + 2));
    k.b_y[j] = 0.5 * wy * (wsq - (vg.dim + 2));
  }
  return k;
}

DistributionField f1_diagnostic(const DistributionField& f, const DistributionField& g,
                                double eps) {
  DistributionField out(f.nx, f.nv);
  const double inv = 1.0 / eps;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.nv; ++j) out(i, j) = (g(i, j) - f(i, j)) * inv;
  return out;
}

FluxDiagnostics nonequilibrium_fluxes(const DistributionField& f1, const MacroFields& mac,
                                      const VelocityGrid& vg) {
  FluxDiagnostics d;
  d.shear_xx.assign(f1.nx, 0.0);
  d.shear_xy.assign(f1.nx, 0.0);
  d.shear_yy.assign(f1.nx, 0.0);
  d.heat_x.assign(f1.nx, 0.0);
  d.heat_y.assign(f1.nx, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < f1.nx; ++i) {
    const double* row = f1.row(i);
    double sxx = 0.0, sxy = 0.0, syy = 0.0, hx = 0.0, hy = 0.0;
    for (int j = 0; j < f1.nv; ++j) {
      const double dx = vg.vx[j] - mac.ux[i];
      const double dy = vg.vy[j] - mac.uy[i];
      const double csq = dx * dx + dy * dy;
      sxx += row[j] * dx * dx;
      sxy += row[j] * dx * dy;
      syy += row[j] * dy * dy;
      hx += row[j] * dx * csq;
      hy += row[j] * dy * csq;
    }
    d.shear_xx[i] = vg.weight * sxx;
    d.shear_xy[i] = vg.weight * sxy;
    d.shear_yy[i] = vg.weight * syy;
    d.heat_x[i] = 0.5 * vg.weight * hx;
    d.heat_y[i] = 0.5 * vg.weight * hy;
  }
  return d;
}

}  // namespace kinetic
