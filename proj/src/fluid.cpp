#include "kinetic/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kinetic/errors.hpp"

namespace kinetic {

void validate(const FluidState& u) {
  for (int i = 0; i < u.nx; ++i) {
    if (!(u.rho[i] > 0.0))
      throw NonPhysicalState("non-positive density at node " + std::to_string(i));
    if (!(u.temperature(i) > 0.0))
      throw NonPhysicalState("non-positive temperature at node " + std::to_string(i));
  }
}

double TransportCoefficients::mu(double rho, double T) const {
  switch (law) {
    case Law::PressureLaw: {
      (void)rho;
      (void)T;
      return mu_ref;
    }
    case Law::RiemannMatched: return T / (0.9 * std::numbers::pi);
    case Law::LaxMatched: return std::sqrt(T);
  }
  return 0.0;
}

double TransportCoefficients::kappa(double rho, double T) const {
  switch (law) {
    case Law::PressureLaw: {
      (void)rho;
      (void)T;
      return 0.5 * (dim + 2) * mu_ref * (1.0 - nu);
    }
    case Law::RiemannMatched: return T / (0.9 * std::numbers::pi);
    case Law::LaxMatched: return 3.75 * std::sqrt(T);
  }
  return 0.0;
}

namespace {

struct Primitives {
  std::vector<double> u1, u2, T, p;
};

Primitives primitives(const FluidState& u) {
  Primitives pr;
  pr.u1.resize(u.nx);
  pr.u2.resize(u.nx);
  pr.T.resize(u.nx);
  pr.p.resize(u.nx);
  for (int i = 0; i < u.nx; ++i) {
    pr.u1[i] = u.mx[i] / u.rho[i];
    pr.u2[i] = u.my[i] / u.rho[i];
    pr.T[i] = u.temperature(i);
    pr.p[i] = u.rho[i] * pr.T[i];
  }
  return pr;
}

}  // namespace

double max_wave_speed(const FluidState& u) {
  const double gamma = static_cast<double>(u.dim + 2) / u.dim;
  double s = 0.0;
  for (int i = 0; i < u.nx; ++i) {
    const double T = u.temperature(i);
    s = std::max(s, std::abs(u.mx[i] / u.rho[i]) + std::sqrt(gamma * T));
  }
  return s;
}

double max_diffusivity(const FluidState& u, double eps, const TransportCoefficients& coeffs) {
  if (eps == 0.0) return 0.0;
  const double sigma_factor = 2.0 - 2.0 / u.dim;
  double d = 0.0;
  for (int i = 0; i < u.nx; ++i) {
    const double T = u.temperature(i);
    const double momentum = coeffs.mu(u.rho[i], T) * std::max(sigma_factor, 1.0) / u.rho[i];
    const double thermal = 2.0 * coeffs.kappa(u.rho[i], T) / (u.dim * u.rho[i]);
    d = std::max(d, std::max(momentum, thermal));
  }
  return eps * d;
}

FluidState euler_rhs(const FluidState& u, const SpatialGrid& sg, WenoOrder order) {
  validate(u);
  const int nx = u.nx;
  const int ncomp = u.dim + 2;
  const Primitives pr = primitives(u);
  const double alpha = max_wave_speed(u);

  // Componentwise local Lax-Friedrichs splitting: F' = d/dx(F+) + d/dx(F-)
  // with upwind-biased reconstructions of each half.
  std::vector<std::vector<double>> cons(ncomp), flux(ncomp);
  for (int c = 0; c < ncomp; ++c) {
    cons[c].resize(nx);
    flux[c].resize(nx);
  }
  for (int i = 0; i < nx; ++i) {
    cons[0][i] = u.rho[i];
    cons[1][i] = u.mx[i];
    flux[0][i] = u.mx[i];
    flux[1][i] = u.mx[i] * pr.u1[i] + pr.p[i];
    if (u.dim == 2) {
      cons[2][i] = u.my[i];
      flux[2][i] = u.my[i] * pr.u1[i];
      cons[3][i] = u.energy[i];
      flux[3][i] = (u.energy[i] + pr.p[i]) * pr.u1[i];
    } else {
      cons[2][i] = u.energy[i];
      flux[2][i] = (u.energy[i] + pr.p[i]) * pr.u1[i];
    }
  }

  FluidState out(nx, u.dim);
  std::vector<double> plus(nx), minus(nx), dplus(nx), dminus(nx);
  for (int c = 0; c < ncomp; ++c) {
    for (int i = 0; i < nx; ++i) {
      plus[i] = 0.5 * (flux[c][i] + alpha * cons[c][i]);
      minus[i] = 0.5 * (flux[c][i] - alpha * cons[c][i]);
    }
    weno_derivative(plus, +1.0, sg.dx(), order, sg.boundary, dplus);
    weno_derivative(minus, -1.0, sg.dx(), order, sg.boundary, dminus);
    std::vector<double>* target = nullptr;
    if (c == 0) target = &out.rho;
    else if (c == 1) target = &out.mx;
    else if (c == 2 && u.dim == 2) target = &out.my;
    else target = &out.energy;
    for (int i = 0; i < nx; ++i) (*target)[i] = -(dplus[i] + dminus[i]);
  }
  return out;
}

FluidState ns_rhs(const FluidState& u, double eps, const TransportCoefficients& coeffs,
                  const SpatialGrid& sg, WenoOrder order) {
  FluidState out = euler_rhs(u, sg, order);
  if (eps == 0.0) return out;

  const int nx = u.nx;
  const Primitives pr = primitives(u);
  const std::vector<double> du1 = central_derivative(pr.u1, sg);
  const std::vector<double> dT = central_derivative(pr.T, sg);
  std::vector<double> du2;
  if (u.dim == 2) du2 = central_derivative(pr.u2, sg);

  const double sigma_factor = 2.0 - 2.0 / u.dim;
  std::vector<double> gm_x(nx), gm_y(nx), ge(nx);
  for (int i = 0; i < nx; ++i) {
    const double mu = coeffs.mu(u.rho[i], pr.T[i]);
    const double kappa = coeffs.kappa(u.rho[i], pr.T[i]);
    const double s11 = sigma_factor * du1[i];
    const double s12 = (u.dim == 2) ? du2[i] : 0.0;
    gm_x[i] = mu * s11;
    gm_y[i] = (u.dim == 2) ? mu * s12 : 0.0;
    ge[i] = mu * (s11 * pr.u1[i] + s12 * pr.u2[i]) + kappa * dT[i];
  }
  const std::vector<double> dgm_x = central_derivative(gm_x, sg);
  const std::vector<double> dge = central_derivative(ge, sg);
  std::vector<double> dgm_y;
  if (u.dim == 2) dgm_y = central_derivative(gm_y, sg);
  for (int i = 0; i < nx; ++i) {
    out.mx[i] += eps * dgm_x[i];
    if (u.dim == 2) out.my[i] += eps * dgm_y[i];
    out.energy[i] += eps * dge[i];
  }
  return out;
}

FluidState rk_solve(FluidState u0, const ButcherTable& table, const FluidRhs& rhs,
                    const SpatialGrid& sg, const FluidControls& controls, double eps,
                    const TransportCoefficients* coeffs, const FluidObserver& observer) {
  if (table.kind != ButcherTable::Kind::Explicit)
    throw MalformedTableau("rk_solve needs an explicit table");
  const int s = table.stages;
  const int nx = u0.nx;
  double t = 0.0;
  int step = 0;
  if (observer) observer(0, 0.0, u0);
  while (t < controls.t_end && controls.t_end - t > 1e-14 * std::max(1.0, controls.t_end)) {
    double dt = controls.cfl * sg.dx() / max_wave_speed(u0);
    if (coeffs) {
      const double d = max_diffusivity(u0, eps, *coeffs);
      if (d > 0.0) dt = std::min(dt, controls.visc_safety * sg.dx() * sg.dx() / (2.0 * d));
    }
    dt = std::min(dt, controls.t_end - t);

    std::vector<FluidState> k(s);
    FluidState uk(nx, u0.dim);
    for (int stage = 0; stage < s; ++stage) {
      uk.rho = u0.rho;
      uk.mx = u0.mx;
      uk.my = u0.my;
      uk.energy = u0.energy;
      for (int l = 0; l < stage; ++l) {
        const double c = table.at(stage, l);
        if (c == 0.0) continue;
        for (int i = 0; i < nx; ++i) {
          uk.rho[i] += dt * c * k[l].rho[i];
          uk.mx[i] += dt * c * k[l].mx[i];
          uk.my[i] += dt * c * k[l].my[i];
          uk.energy[i] += dt * c * k[l].energy[i];
        }
      }
      k[stage] = rhs(uk);
    }
    for (int stage = 0; stage < s; ++stage) {
      const double b = table.b[stage];
      if (b == 0.0) continue;
      for (int i = 0; i < nx; ++i) {
        u0.rho[i] += dt * b * k[stage].rho[i];
        u0.mx[i] += dt * b * k[stage].mx[i];
        u0.my[i] += dt * b * k[stage].my[i];
        u0.energy[i] += dt * b * k[stage].energy[i];
      }
    }
    t += dt;
    ++step;
    if (observer) observer(step, t, u0);
  }
  return u0;
}

}  // namespace kinetic
