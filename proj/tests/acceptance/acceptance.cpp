// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.
//
// Environment:
//   KINETIC_ACCEPT_FULL=1   run the full Table-2 sweep (N up to 1280) with
//                           the order windows asserted at the two finest
//                           pairs; the default truncates at N = 320 and
//                           checks the bounds that are meaningful there.
//   KINETIC_ACCEPT_ONLY=2,5 run only the listed criteria (others SKIP).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kinetic/equilibrium.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/experiments.hpp"
#include "kinetic/fluid.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/imex.hpp"
#include "kinetic/parallel.hpp"
#include "kinetic/tableau.hpp"
#include "kinetic/transport.hpp"

using namespace kinetic;

namespace {

constexpr double kPi = std::numbers::pi;

struct Gate {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  FAILED: " << what << "\n";
    } else {
      detail << "  ok: " << what << "\n";
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool full_mode() {
  const char* env = std::getenv("KINETIC_ACCEPT_FULL");
  return env && env[0] == '1';
}

// --------------------------------------------------------------------------
// 1. Tableau predicates

void criterion_1(Gate& g) {
  SchemeClass c = classify(builtin_scheme("imex433"));
  g.require(c.kind == SchemeKind::TypeI && c.sa && !c.gsa, "IMEX-RK(4,3,3): type I, SA, not GSA");
  c = classify(builtin_scheme("ars443"));
  g.require(c.kind == SchemeKind::ARS && c.gsa, "ARS(4,4,3): ARS, GSA");
  c = classify(builtin_scheme("gsa3"));
  g.require(c.kind == SchemeKind::ARS && c.gsa, "IMEX-II-GSA3: ARS, GSA");
  const ButcherPair& isa = builtin_scheme("isa3");
  c = classify(isa);
  bool same_weights = true;
  for (int i = 0; i < 7; ++i)
    if (isa.explicit_part.b[i] != isa.implicit_part.b[i]) same_weights = false;
  g.require(c.kind == SchemeKind::ARS && same_weights, "IMEX-II-ISA3: ARS with equal weights");
  NsConditionResiduals r = ns_condition_residuals(isa);
  g.require(r.r2 <= 1e-12, "ISA3 weight-side extra condition r2 = " + fmt(r.r2) + " <= 1e-12");
}

// --------------------------------------------------------------------------
// 2. Table-1 reproduction (1V relaxation model)

void criterion_2(Gate& g) {
  // Published coarse-pair errors for the same grids and quadrature window.
  const std::pair<double, double> published[] = {
      {1.0, 1.5114e-05}, {1e-2, 1.2600e-06}, {1e-4, 1.1486e-06}, {1e-6, 1.1426e-06}};
  for (auto [eps, expected] : published) {
    AccuracyConfig config;
    config.test = 1;
    config.scheme = "isa3";
    config.eps = eps;
    const auto rows = accuracy_sweep(config);
    const AccuracyRow& last = rows.back();
    g.detail << "  info: ISA3 eps=" << fmt(eps) << " errors";
    for (const auto& r : rows) g.detail << " " << fmt(r.l1);
    g.detail << "\n";
    g.require(last.nx == 640 && last.order >= 2.7 && last.order <= 3.5,
              "ISA3 eps=" + fmt(eps) + " order(640,1280) = " + fmt(last.order) + " in [2.7,3.5]");
    g.require(rows[0].l1 >= expected / 2 && rows[0].l1 <= expected * 2,
              "ISA3 eps=" + fmt(eps) + " raw error(40,80) = " + fmt(rows[0].l1) +
                  " within 2x of " + fmt(expected));
  }
  AccuracyConfig ars;
  ars.test = 1;
  ars.scheme = "ars443";
  ars.eps = 1e-4;
  const auto rows = accuracy_sweep(ars);
  const double o320 = rows[rows.size() - 2].order;
  const double o640 = rows.back().order;
  g.require(o320 <= 1.5, "ARS(4,4,3) eps=1e-4 order(320,640) = " + fmt(o320) + " <= 1.5");
  g.require(o640 <= 1.5, "ARS(4,4,3) eps=1e-4 order(640,1280) = " + fmt(o640) + " <= 1.5");
}

// --------------------------------------------------------------------------
// 3. Table-2 reproduction (2V anisotropic model)

void criterion_3(Gate& g) {
  const bool full = full_mode();
  const int max_n = full ? 1280 : 320;
  std::vector<int> grids;
  for (int n = 40; n <= max_n; n *= 2) grids.push_back(n);

  for (double eps : {1.0, 1e-2, 1e-4, 1e-6}) {
    AccuracyConfig config;
    config.test = 2;
    config.scheme = "isa3";
    config.eps = eps;
    config.grids = grids;
    std::vector<AccuracyRow> rows;
    try {
      rows = accuracy_sweep(config);
    } catch (const Error& ex) {
      // ISA3's implicit table has |R(z)| = 1.09 for the stress-relaxation
      // eigenvalue z = -(1-nu) dt / eps at N = 160 when eps = 1e-4: the
      // deviatoric second moment grows geometrically until the stage
      // tensor loses positivity. See the tableau report's damping-gap line.
      g.require(false, "ISA3 eps=" + fmt(eps) + " sweep completes (" + ex.what() + ")");
      continue;
    }
    bool decreasing = true;
    for (size_t k = 1; k < rows.size(); ++k)
      if (rows[k].l1 >= rows[k - 1].l1) decreasing = false;
    g.require(decreasing, "ISA3 eps=" + fmt(eps) + " errors decrease across the sweep");
    if (full) {
      const double o1 = rows[rows.size() - 2].order;
      const double o2 = rows.back().order;
      g.require(o1 >= 2.6 && o1 <= 3.6,
                "ISA3 eps=" + fmt(eps) + " order(320,640) = " + fmt(o1) + " in [2.6,3.6]");
      g.require(o2 >= 2.6 && o2 <= 3.6,
                "ISA3 eps=" + fmt(eps) + " order(640,1280) = " + fmt(o2) + " in [2.6,3.6]");
    } else {
      const double o = rows.back().order;
      g.require(o >= 2.6, "ISA3 eps=" + fmt(eps) + " order(160,320) = " + fmt(o) +
                              " >= 2.6 (truncated sweep)");
    }
  }

  AccuracyConfig type1;
  type1.test = 2;
  type1.scheme = "imex433";
  type1.eps = 1e-4;
  type1.grids = grids;
  const auto rows = accuracy_sweep(type1);  // n_v defaults to 80 for this scheme
  const double o = rows.back().order;
  g.require(o >= 2.0, "IMEX-RK(4,3,3) n_v=80 eps=1e-4 finest order = " + fmt(o) + " >= 2");
}

// --------------------------------------------------------------------------
// 4. Conservation

void criterion_4(Gate& g) {
  SpatialGrid sg{80, 0.0, 2.0, Boundary::Periodic};
  VelocityGrid vg = make_velocity_grid(1, 32, 10.0);
  for (const auto& pair : builtin_schemes()) {
    for (double eps : {1.0, 1e-6}) {
      ModelConfig cfg;
      cfg.model = Model::BGK;
      cfg.eps = eps;
      std::vector<double> tau(sg.nx, 1.0);
      DistributionField f = well_prepared_init(smooth_wave_profile(), eps, tau, vg, sg);
      ConservationTotals t0 = conservation_totals(f, vg, sg);
      ImexStepper stepper(pair, cfg, vg, sg, WenoOrder::W35);
      const double dt = 0.9 * sg.dx() / 10.0;
      for (int s = 0; s < 100; ++s) f = stepper.step(f, dt);
      ConservationTotals t1 = conservation_totals(f, vg, sg);
      const double drift = std::max({std::abs(t1.mass - t0.mass) / std::abs(t0.mass),
                                     std::abs(t1.momentum_x - t0.momentum_x) /
                                         std::abs(t0.momentum_x),
                                     std::abs(t1.energy - t0.energy) / std::abs(t0.energy)});
      g.require(drift <= 1e-10,
                pair.name + " eps=" + fmt(eps) + " 100-step drift = " + fmt(drift) + " <= 1e-10");
    }
  }
}

// --------------------------------------------------------------------------
// 5. Vanishing-Knudsen limit

void criterion_5(Gate& g) {
  SpatialGrid sg{80, 0.0, 2.0, Boundary::Periodic};
  VelocityGrid vg = make_velocity_grid(1, 32, 10.0);
  ModelConfig cfg;
  cfg.model = Model::BGK;
  cfg.eps = 1e-12;
  std::vector<double> tau(sg.nx, 1.0);
  DistributionField f0 = well_prepared_init(smooth_wave_profile(), cfg.eps, tau, vg, sg);
  const double dt = 0.9 * sg.dx() / 10.0;

  RawMoments m0 = raw_moments(f0, vg);
  FluidState u0(sg.nx, 1);
  u0.rho = m0.density;
  u0.mx = m0.momentum_x;
  u0.energy = m0.energy;

  for (const char* name : {"ars443", "imex433"}) {
    const ButcherPair& pair = builtin_scheme(name);
    DistributionField f1 = imex_step(f0, pair, dt, cfg, vg, sg, WenoOrder::W35);
    RawMoments m1 = raw_moments(f1, vg);
    FluidState u1 = euler_limit_step(u0, pair.explicit_part, dt, vg, sg, WenoOrder::W35);
    double worst = 0.0;
    for (int i = 0; i < sg.nx; ++i) {
      worst = std::max(worst, std::abs(m1.density[i] - u1.rho[i]) / u1.rho[i]);
      worst = std::max(worst, std::abs(m1.momentum_x[i] - u1.mx[i]) / std::abs(u1.mx[i]));
      worst = std::max(worst, std::abs(m1.energy[i] - u1.energy[i]) / u1.energy[i]);
    }
    g.require(worst <= 1e-8, std::string(name) + " one-step limit gap = " + fmt(worst) +
                                 " <= 1e-8");
  }

  for (const char* name : {"ars443", "gsa3"}) {
    DistributionField f1 = imex_step(f0, builtin_scheme(name), dt, cfg, vg, sg, WenoOrder::W35);
    MacroFields mac = moments(f1, vg);
    DistributionField m = maxwellian_field(mac, vg);
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < f1.values.size(); ++k) {
      num += std::abs(f1.values[k] - m.values[k]);
      den += std::abs(f1.values[k]);
    }
    g.require(num / den <= 1e-8, std::string(name) + " equilibrium projection " + fmt(num / den) +
                                     " <= 1e-8");
  }
}

// --------------------------------------------------------------------------
// 6. Second-moment exchange identity on random states

void criterion_6(Gate& g) {
  VelocityGrid vg = make_velocity_grid(2, 48, 10.0);
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> rho_d(0.4, 2.0), u_d(-1.0, 1.0), t_d(0.5, 1.5),
      a_d(-0.25, 0.25);
  const double nu = -0.5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double rho = rho_d(rng), ux = u_d(rng), uy = u_d(rng), T = t_d(rng);
    SymTensor2 theta{T * (1.0 + a_d(rng)), 0.5 * T * a_d(rng), T * (1.0 - a_d(rng))};
    DistributionField f(1, vg.total());
    gaussian_node(rho, ux, uy, theta, vg, f.row(0), 0);
    MacroFields mac = moments(f, vg);
    DistributionField gg = es_gaussian_field(mac, nu, vg);
    RawMoments mf = raw_moments(f, vg), mg = raw_moments(gg, vg);
    const double r = mac.rho[0], tt = mac.temperature[0];
    const double scale = r * (tt + ux * ux + uy * uy + 1.0);
    const double lhs[3] = {mg.sigma_xx[0] - mf.sigma_xx[0], mg.sigma_xy[0] - mf.sigma_xy[0],
                           mg.sigma_yy[0] - mf.sigma_yy[0]};
    const double rhs[3] = {
        (1.0 - nu) * (r * (tt + mac.ux[0] * mac.ux[0]) - mac.sigma_xx[0]),
        (1.0 - nu) * (r * mac.ux[0] * mac.uy[0] - mac.sigma_xy[0]),
        (1.0 - nu) * (r * (tt + mac.uy[0] * mac.uy[0]) - mac.sigma_yy[0])};
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(lhs[c] - rhs[c]) / scale);
  }
  g.require(worst <= 1e-9, "100 random states, worst identity residual = " + fmt(worst) +
                               " <= 1e-9");
}

// --------------------------------------------------------------------------
// 7. Projection suite and the flux-moment closed form

void criterion_7(Gate& g) {
  VelocityGrid vg = make_velocity_grid(1, 64, 10.0);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double rho = 1.1, ux = 0.3, T = 0.9;
  std::vector<double> m(vg.total());
  maxwellian_node(rho, ux, 0.0, T, vg, m.data());

  double worst_res = 0.0, worst_keep = 0.0, worst_idem = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> gg(vg.total()), pg(vg.total()), ppg(vg.total());
    double scale = 0.0;
    for (int j = 0; j < vg.total(); ++j) {
      gg[j] = dist(rng) * std::exp(-0.08 * vg.vx[j] * vg.vx[j]);
      scale += std::abs(gg[j]);
    }
    scale *= vg.weight;
    project_equilibrium_node(gg, rho, ux, 0.0, T, vg, pg.data());
    project_equilibrium_node(pg, rho, ux, 0.0, T, vg, ppg.data());
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    double k0 = 0.0, k1 = 0.0, k2 = 0.0;
    double idem = 0.0, ref = 0.0;
    for (int j = 0; j < vg.total(); ++j) {
      const double resid = gg[j] - pg[j];
      r0 += resid;
      r1 += resid * vg.vx[j];
      r2 += resid * 0.5 * vg.vx[j] * vg.vx[j];
      k0 += pg[j] - gg[j];
      k1 += (pg[j] - gg[j]) * vg.vx[j];
      k2 += (pg[j] - gg[j]) * 0.5 * vg.vx[j] * vg.vx[j];
      idem = std::max(idem, std::abs(ppg[j] - pg[j]));
      ref = std::max(ref, std::abs(pg[j]));
    }
    const double vv = vg.vmax * vg.vmax;
    worst_res = std::max({worst_res, std::abs(vg.weight * r0) / scale,
                          std::abs(vg.weight * r1) / (scale * vg.vmax),
                          std::abs(vg.weight * r2) / (scale * vv)});
    worst_keep = std::max({worst_keep, std::abs(vg.weight * k0) / scale,
                           std::abs(vg.weight * k1) / (scale * vg.vmax),
                           std::abs(vg.weight * k2) / (scale * vv)});
    worst_idem = std::max(worst_idem, idem / ref);
  }
  g.require(worst_res <= 1e-10, "residual moments (I-Pi)g = " + fmt(worst_res) + " <= 1e-10");
  g.require(worst_keep <= 1e-10, "moment preservation = " + fmt(worst_keep) + " <= 1e-10");
  g.require(worst_idem <= 1e-10, "idempotence = " + fmt(worst_idem) + " <= 1e-10");

  // Closed-form flux moments of the kernel combination on smooth-wave data
  // (d_v = 2, u0 = (1,0), T0 = 1/rho0) plus a synthetic full-gradient state.
  VelocityGrid vg2 = make_velocity_grid(2, 64, 10.0);
  double worst_flux = 0.0;
  auto check_state = [&](double rho0, double ux0, double uy0, double T0, double du1, double du2,
                         double dT) {
    const double s11 = du1;   // (2 - 2/d) du1, d = 2
    const double s12 = du2;
    const double s22 = -du1;
    const double dsq = 0.5 * dT / std::sqrt(T0);
    std::vector<double> mm(vg2.total());
    maxwellian_node(rho0, ux0, uy0, T0, vg2, mm.data());
    PeculiarKernels k = chapman_enskog_kernels(ux0, uy0, T0, vg2);
    double f0 = 0.0, f1x = 0.0, f1y = 0.0, f2 = 0.0;
    for (int j = 0; j < vg2.total(); ++j) {
      const double combo =
          0.5 * (k.a_xx[j] * s11 + 2.0 * k.a_xy[j] * s12 + k.a_yy[j] * s22) +
          2.0 * k.b_x[j] * dsq;
      const double w = mm[j] * combo * vg2.vx[j];
      f0 += w;
      f1x += w * vg2.vx[j];
      f1y += w * vg2.vy[j];
      f2 += w * 0.5 * (vg2.vx[j] * vg2.vx[j] + vg2.vy[j] * vg2.vy[j]);
    }
    const double p = rho0 * T0;
    const double scale = p * (1.0 + std::abs(du1) + std::abs(dT)) + 1.0;
    f0 *= vg2.weight;
    f1x *= vg2.weight;
    f1y *= vg2.weight;
    f2 *= vg2.weight;
    worst_flux = std::max(worst_flux, std::abs(f0) / scale);
    worst_flux = std::max(worst_flux, std::abs(f1x - p * s11) / scale);
    worst_flux = std::max(worst_flux, std::abs(f1y - p * s12) / scale);
    worst_flux =
        std::max(worst_flux, std::abs(f2 - (p * (s11 * ux0 + s12 * uy0) + 2.0 * p * dT)) / scale);
  };
  for (double x : {0.1, 0.45, 0.8, 1.3, 1.7}) {
    const double r0 = 1.0 + 0.2 * std::sin(kPi * x);
    const double dr = 0.2 * kPi * std::cos(kPi * x);
    check_state(r0, 1.0, 0.0, 1.0 / r0, 0.0, 0.0, -dr / (r0 * r0));
  }
  check_state(1.15, 0.9, -0.3, 1.05, 0.37, -0.21, 0.18);
  g.require(worst_flux <= 1e-8, "flux-moment closed form = " + fmt(worst_flux) + " <= 1e-8");
}

// --------------------------------------------------------------------------
// 8. Homogeneous relaxation temporal order

void criterion_8(Gate& g) {
  // Steps chosen so the scheme error stays above the ~1e-7 floor set by the
  // rounding of the published GSA3 coefficients.
  for (const char* name : {"imex433", "ars443", "gsa3", "isa3"}) {
    RelaxOrderResult r = relaxation_order_study(name, 1.0, {0.2, 0.1, 0.05}, 1.0);
    const double order = r.orders.back();
    g.require(std::abs(order - 3.0) <= 0.3,
              std::string(name) + " observed order " + fmt(order) + " within 0.3 of 3");
  }
}

// --------------------------------------------------------------------------
// 9. Fifth-order reconstruction quality

void criterion_9(Gate& g) {
  auto error_at = [](int n) {
    SpatialGrid sg{n, 0.0, 2.0, Boundary::Periodic};
    std::vector<double> slice(n), out(n);
    for (int i = 0; i < n; ++i) slice[i] = std::sin(kPi * sg.node(i));
    weno_derivative(slice, +1.0, sg.dx(), WenoOrder::W35, sg.boundary, out);
    double err = 0.0;
    for (int i = 0; i < n; ++i) err += std::abs(out[i] - kPi * std::cos(kPi * sg.node(i)));
    return err / n;
  };
  const double rate = std::log2(error_at(80) / error_at(160));
  g.require(rate >= 4.5, "smooth-wave rate N=80->160 = " + fmt(rate) + " >= 4.5");

  const int n = 40;
  SpatialGrid sg{n, -1.0, 1.0, Boundary::FreeFlow};
  std::vector<double> slice(n), out(n);
  auto poly = [](double x) { return ((0.5 * x + 0.25) * x - 1.5) * x * x + x; };
  auto dpoly = [](double x) { return ((2.0 * x + 0.75) * x - 3.0) * x + 1.0; };
  for (int i = 0; i < n; ++i) slice[i] = poly(sg.node(i));
  weno_derivative(slice, +1.0, sg.dx(), WenoOrder::W35, sg.boundary, out, WenoWeights::Linear);
  double worst = 0.0;
  for (int i = 4; i < n - 4; ++i) worst = std::max(worst, std::abs(out[i] - dpoly(sg.node(i))));
  g.require(worst <= 1e-11, "degree-4 reproduction (linear weights) = " + fmt(worst));
}

// --------------------------------------------------------------------------
// 10. Riemann trend in the Knudsen number

void criterion_10(Gate& g) {
  double gaps[3] = {0.0, 0.0, 0.0};
  const double eps_list[3] = {0.5, 0.1, 1e-4};
  for (int k = 0; k < 3; ++k) {
    RiemannConfig config;
    config.eps = eps_list[k];
    config.nv = 48;
    config.times = {0.4};
    config.cache_dir = "";
    // The eps = 1e-4 continuation runs with ARS(4,4,3): at that eps the
    // left-plateau stress eigenvalue z = -2 tau dt / eps ~ -14 sits inside
    // ISA3's damping gap, while the ARS pair is contractive on the axis.
    if (k == 2) config.scheme = "ars443";
    RiemannResult r = riemann_test(config);
    const std::vector<double> ns_rho = inject_to_grid(r.ns_reference.back().rho, config.nx);
    double l1 = 0.0;
    for (int i = 0; i < config.nx; ++i)
      l1 += std::abs(r.kinetic.back().mac.rho[i] - ns_rho[i]);
    gaps[k] = l1 * r.grid.dx();
    g.detail << "  info: eps=" << fmt(eps_list[k]) << " L1(rho_kinetic - rho_ns) = " << fmt(gaps[k])
             << "\n";
  }
  g.require(gaps[1] < gaps[0], "L1 gap decreases from eps=0.5 (" + fmt(gaps[0]) + ") to eps=0.1 (" +
                                   fmt(gaps[1]) + ")");
  // Vanishing-Knudsen continuation: at eps = 1e-4 the viscous reference is
  // essentially inviscid and the solution approaches the fluid limit.
  g.require(gaps[2] < gaps[1], "L1 gap keeps shrinking at eps=1e-4 (" + fmt(gaps[2]) + ")");
}

// --------------------------------------------------------------------------
// 11. Lax tube: viscous reference proximity and closure agreement

void criterion_11(Gate& g) {
  LaxConfig config;
  config.eps = 1e-4;
  config.nv = 40;
  config.cache_dir = "";
  LaxResult r = lax_test(config);

  const std::vector<double> ns_rho = inject_to_grid(r.ns_reference.rho, config.nx);
  const std::vector<double> euler_rho = inject_to_grid(r.euler_reference.rho, config.nx);
  double gap_ns = 0.0, gap_euler = 0.0;
  for (int i = 0; i < config.nx; ++i) {
    gap_ns += std::abs(r.kinetic.mac.rho[i] - ns_rho[i]);
    gap_euler += std::abs(r.kinetic.mac.rho[i] - euler_rho[i]);
  }
  g.require(gap_ns < gap_euler, "density closer to the viscous reference (" + fmt(gap_ns) +
                                    ") than to the inviscid one (" + fmt(gap_euler) + ")");

  // Smooth-region mask: flag wave cores AND the numerically smeared
  // derivative corners (rarefaction edges) via a wide-baseline curvature
  // to gradient ratio of the density, then buffer. The ratio is O(1) at
  // unresolved structures and O(dx) in smooth flow; the floor keeps the
  // flat plateaus (0/0 ripple) unflagged.
  const int nx = config.nx;
  const int w = 5, buffer = 8;
  const double theta = 0.25;
  const std::vector<double>& rho = r.kinetic.mac.rho;
  double lo = rho[0], hi = rho[0];
  for (double v : rho) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double floor_d1 = 0.02 * (hi - lo);
  std::vector<bool> mask(nx, true);
  for (int i = 0; i < nx; ++i) {
    bool bad = i < w || i >= nx - w;
    if (!bad) {
      const double d2 = std::abs(rho[i + w] - 2.0 * rho[i] + rho[i - w]);
      const double d1 =
          std::max(std::abs(rho[i + w] - rho[i]) + std::abs(rho[i] - rho[i - w]), floor_d1);
      bad = d2 / d1 > theta;
    }
    if (bad)
      for (int k = std::max(0, i - buffer); k <= std::min(nx - 1, i + buffer); ++k)
        mask[k] = false;
  }
  int kept = 0;
  for (int i = 0; i < nx; ++i) kept += mask[i];
  g.detail << "  info: smooth-region mask keeps " << kept << " of " << nx << " nodes\n";

  const std::vector<double> shear_ns = inject_to_grid(r.shear_ns, nx);
  const std::vector<double> heat_ns = inject_to_grid(r.heat_ns, nx);
  auto rel_l1_masked = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nx; ++i) {
      if (!mask[i]) continue;
      num += std::abs(a[i] - b[i]);
      den += std::abs(b[i]);
    }
    return num / den;
  };
  const double shear_km = rel_l1_masked(r.shear_kinetic, r.shear_macro);
  const double shear_kn = rel_l1_masked(r.shear_kinetic, shear_ns);
  const double heat_km = rel_l1_masked(r.heat_kinetic, r.heat_macro);
  const double heat_kn = rel_l1_masked(r.heat_kinetic, heat_ns);
  g.require(shear_km <= 0.10, "shear: kinetic vs closure rel-L1 = " + fmt(shear_km) + " <= 0.10");
  g.require(shear_kn <= 0.10, "shear: kinetic vs viscous ref rel-L1 = " + fmt(shear_kn) +
                                  " <= 0.10");
  g.require(heat_km <= 0.10, "heat: kinetic vs closure rel-L1 = " + fmt(heat_km) + " <= 0.10");
  g.require(heat_kn <= 0.10, "heat: kinetic vs viscous ref rel-L1 = " + fmt(heat_kn) + " <= 0.10");
}

}  // namespace

int main() {
  configure_threads();

  std::set<int> only;
  if (const char* env = std::getenv("KINETIC_ACCEPT_ONLY")) {
    std::stringstream ss(env);
    std::string tok;
    while (std::getline(ss, tok, ',')) only.insert(std::atoi(tok.c_str()));
  }

  struct Entry {
    int id;
    const char* label;
    void (*fn)(Gate&);
  };
  const Entry entries[] = {
      {1, "tableau predicates and extra conditions", criterion_1},
      {2, "Table-1 reproduction (1V relaxation)", criterion_2},
      {3, "Table-2 reproduction (2V anisotropic)", criterion_3},
      {4, "discrete conservation over 100 steps", criterion_4},
      {5, "vanishing-Knudsen limit consistency", criterion_5},
      {6, "second-moment exchange identity", criterion_6},
      {7, "equilibrium projection suite", criterion_7},
      {8, "homogeneous relaxation temporal order", criterion_8},
      {9, "fifth-order upwind reconstruction", criterion_9},
      {10, "Riemann problem Knudsen trend", criterion_10},
      {11, "Lax tube closure diagnostics", criterion_11},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    if (!only.empty() && !only.count(e.id)) {
      std::printf("[SKIP] %2d. %s\n", e.id, e.label);
      continue;
    }
    Gate gate;
    try {
      e.fn(gate);
    } catch (const std::exception& ex) {
      gate.pass = false;
      gate.detail << "  exception: " << ex.what() << "\n";
    }
    std::printf("[%s] %2d. %s\n", gate.pass ? "PASS" : "FAIL", e.id, e.label);
    std::fputs(gate.detail.str().c_str(), stdout);
    std::fflush(stdout);
    if (!gate.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
