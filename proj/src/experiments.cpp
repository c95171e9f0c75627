#include "kinetic/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "kinetic/csv.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/tableau.hpp"

namespace kinetic {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

}  // namespace

InitialProfile smooth_wave_profile() {
  InitialProfile p;
  p.rho = [](double x) { return 1.0 + 0.2 * std::sin(kPi * x); };
  p.ux = [](double) { return 1.0; };
  p.temperature = [](double x) { return 1.0 / (1.0 + 0.2 * std::sin(kPi * x)); };
  p.drho = [](double x) { return 0.2 * kPi * std::cos(kPi * x); };
  p.dux = [](double) { return 0.0; };
  p.dtemperature = [](double x) {
    const double r = 1.0 + 0.2 * std::sin(kPi * x);
    return -0.2 * kPi * std::cos(kPi * x) / (r * r);
  };
  p.uy = 0.0;
  return p;
}

std::vector<AccuracyRow> accuracy_sweep(const AccuracyConfig& config) {
  if (config.test != 1 && config.test != 2) throw Error("accuracy test id must be 1 or 2");
  const ButcherPair& pair = builtin_scheme(config.scheme);

  ModelConfig cfg;
  if (config.test == 1) {
    cfg.model = Model::BGK;
    cfg.nu = 0.0;
  } else {
    cfg.model = Model::ESBGK;
    cfg.nu = -0.5;
  }
  cfg.eps = config.eps;
  cfg.tau_law = TauLaw::Unit;

  int nv = config.nv;
  if (nv == 0) nv = (config.test == 2 && pair.name == "IMEX-RK(4,3,3)") ? 80 : 32;
  const int dim = (config.test == 1) ? 1 : 2;
  const VelocityGrid vg = make_velocity_grid(dim, nv, 10.0);

  const InitialProfile profile = smooth_wave_profile();
  std::vector<std::vector<double>> densities;
  std::vector<SpatialGrid> grids;
  for (int n : config.grids) {
    SpatialGrid sg{n, 0.0, 2.0, Boundary::Periodic};
    std::vector<double> tau(n, 1.0);
    DistributionField f0 = well_prepared_init(profile, config.eps, tau, vg, sg);
    TimeControls controls;
    controls.cfl = config.cfl;
    controls.speed = 10.0;
    controls.t_end = config.t_end;
    RunResult result = run(std::move(f0), pair, controls, cfg, vg, sg, WenoOrder::W35);
    densities.push_back(moments(result.f, vg).rho);
    grids.push_back(sg);
  }

  std::vector<AccuracyRow> rows;
  for (size_t k = 0; k + 1 < densities.size(); ++k) {
    if (grids[k + 1].nx != 2 * grids[k].nx) throw Error("grid sweep must double");
    std::vector<double> restricted =
        restrict_to_coarse(grids[k + 1], grids[k], densities[k + 1]);
    AccuracyRow row;
    row.nx = grids[k].nx;
    row.eps = config.eps;
    row.l1 = l1_rel_error(densities[k], restricted);
    row.order = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : std::log2(rows.back().l1 / row.l1);
    rows.push_back(row);
  }
  return rows;
}

void write_accuracy_csv(const std::string& path, const std::vector<AccuracyRow>& rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows)
    data.push_back({static_cast<double>(r.nx), r.eps, r.l1, r.order});
  write_csv(path, {"N", "eps", "l1", "order"}, data);
}

namespace {

FluidState macro_to_fluid(const MacroFields& mac) {
  FluidState u(mac.nx, mac.dim);
  for (int i = 0; i < mac.nx; ++i) {
    u.rho[i] = mac.rho[i];
    u.mx[i] = mac.rho[i] * mac.ux[i];
    u.my[i] = mac.rho[i] * mac.uy[i];
    u.energy[i] = mac.energy[i];
  }
  return u;
}

MacroFields piecewise_state(const SpatialGrid& sg, int dim, double split, bool left_closed,
                            double rho_l, double ux_l, double t_l, double rho_r, double ux_r,
                            double t_r, double smooth_width = 0.0) {
  MacroFields mac(sg.nx, dim);
  for (int i = 0; i < sg.nx; ++i) {
    double wl;
    if (smooth_width > 0.0) {
      wl = 0.5 * (1.0 + std::tanh((split - sg.node(i)) / smooth_width));
    } else {
      const bool left = left_closed ? sg.node(i) <= split : sg.node(i) < split;
      wl = left ? 1.0 : 0.0;
    }
    mac.rho[i] = wl * rho_l + (1.0 - wl) * rho_r;
    mac.ux[i] = wl * ux_l + (1.0 - wl) * ux_r;
    mac.uy[i] = 0.0;
    mac.temperature[i] = wl * t_l + (1.0 - wl) * t_r;
    mac.energy[i] =
        0.5 * mac.rho[i] * mac.ux[i] * mac.ux[i] + 0.5 * dim * mac.rho[i] * mac.temperature[i];
  }
  return mac;
}

// Runs the solver while holding the latest macroscopic snapshot; on failure
// the snapshot is dumped for post-mortem before the error propagates.
RunResult run_with_dump(DistributionField f, const ButcherPair& pair, const TimeControls& controls,
                        const ModelConfig& cfg, const VelocityGrid& vg, const SpatialGrid& sg,
                        WenoOrder order, const std::string& dump_dir) {
  MacroFields last;
  bool have = false;
  Observer obs;
  if (!dump_dir.empty()) {
    obs = [&](int, double, const MacroFields& m, const ConservationTotals&) {
      last = m;
      have = true;
    };
  }
  try {
    return run(std::move(f), pair, controls, cfg, vg, sg, order, obs);
  } catch (const Error&) {
    if (have) write_macro_csv(dump_dir + "/failure_state.csv", sg, last);
    throw;
  }
}

KineticSnapshot snapshot_from(const DistributionField& f, double time, const ModelConfig& cfg,
                              const VelocityGrid& vg) {
  KineticSnapshot snap;
  snap.time = time;
  snap.mac = moments(f, vg);
  const DistributionField g = es_gaussian_field(snap.mac, cfg.nu, vg);
  const DistributionField f1 = f1_diagnostic(f, g, cfg.eps);
  snap.fluxes = nonequilibrium_fluxes(f1, snap.mac, vg);
  return snap;
}

}  // namespace

FluidState shock_reference(const std::string& test, double eps, int ref_nx, double t_end,
                           const TransportCoefficients& coeffs, const SpatialGrid& ref_grid,
                           const FluidState& u0, WenoOrder order, const std::string& cache_dir) {
  std::string cache_path;
  if (!cache_dir.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s/refcache_%s_%s_%d_rk4.csv", cache_dir.c_str(), test.c_str(),
                  format_eps(eps).c_str(), ref_nx);
    cache_path = buf;
    if (file_exists(cache_path)) {
      const CsvTable table = read_csv(cache_path);
      FluidState u(ref_nx, u0.dim);
      for (int i = 0; i < ref_nx; ++i) {
        u.rho[i] = table.rows[i][1];
        u.mx[i] = table.rows[i][2];
        u.my[i] = table.rows[i][3];
        u.energy[i] = table.rows[i][4];
      }
      return u;
    }
  }

  FluidControls controls;
  controls.cfl = 0.4;
  controls.t_end = t_end;
  const ButcherTable rk4 = classic_rk4();
  auto rhs = [&](const FluidState& u) { return ns_rhs(u, eps, coeffs, ref_grid, order); };
  FluidState u = rk_solve(u0, rk4, rhs, ref_grid, controls, eps, &coeffs);

  if (!cache_path.empty()) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < ref_nx; ++i)
      rows.push_back({ref_grid.node(i), u.rho[i], u.mx[i], u.my[i], u.energy[i]});
    write_csv(cache_path, {"x", "rho", "mx", "my", "E"}, rows);
  }
  return u;
}

RiemannResult riemann_test(const RiemannConfig& config) {
  const double mach_velocity = 2.5 * std::sqrt(2.0);
  RiemannResult result;
  result.grid = SpatialGrid{config.nx, -1.0, 2.0, Boundary::FreeFlow};
  result.ref_grid = SpatialGrid{config.ref_nx, -1.0, 2.0, Boundary::FreeFlow};

  ModelConfig cfg;
  cfg.model = Model::ESBGK;
  cfg.eps = config.eps;
  cfg.nu = -1.0;
  cfg.tau_law = TauLaw::Linear;
  cfg.tau_coeff = 0.45 * kPi;

  const VelocityGrid vg = make_velocity_grid(2, config.nv, 15.0);
  const MacroFields mac0 = piecewise_state(result.grid, 2, 0.5, true, 1.0, mach_velocity, 1.0,
                                           0.125, 0.0, 0.25);
  DistributionField f = maxwellian_field(mac0, vg);

  const ButcherPair& pair = builtin_scheme(config.scheme);
  double t = 0.0;
  for (double target : config.times) {
    if (target > t) {
      TimeControls controls;
      controls.cfl = config.cfl;
      controls.speed = vg.vmax;
      controls.t_end = target - t;
      RunResult r = run_with_dump(std::move(f), pair, controls, cfg, vg, result.grid,
                                  WenoOrder::W23, config.cache_dir);
      f = std::move(r.f);
      t = target;
    }
    result.kinetic.push_back(snapshot_from(f, t, cfg, vg));
  }

  TransportCoefficients coeffs;
  coeffs.law = TransportCoefficients::Law::RiemannMatched;
  coeffs.dim = 2;
  // The viscous reference starts from a jump mollified over two fine cells
  // so the wide centered diffusion stencil sees smooth data from step one.
  const MacroFields ref0 = piecewise_state(result.ref_grid, 2, 0.5, true, 1.0, mach_velocity, 1.0,
                                           0.125, 0.0, 0.25, 2.0 * result.ref_grid.dx());
  const FluidState u0 = macro_to_fluid(ref0);
  for (double target : config.times) {
    result.ns_reference.push_back(shock_reference("riemann", config.eps, config.ref_nx, target,
                                                  coeffs, result.ref_grid, u0, WenoOrder::W23,
                                                  config.cache_dir));
  }
  return result;
}

void model_closure_curves(const std::vector<double>& rho, const std::vector<double>& u1,
                          const std::vector<double>& temperature, const ModelConfig& cfg, int dim,
                          const SpatialGrid& sg, std::vector<double>& shear,
                          std::vector<double>& heat) {
  const int nx = static_cast<int>(rho.size());
  const std::vector<double> du = central_derivative(u1, sg);
  const std::vector<double> dT = central_derivative(temperature, sg);
  shear.resize(nx);
  heat.resize(nx);
  const double sigma_factor = 2.0 - 2.0 / dim;
  for (int i = 0; i < nx; ++i) {
    const double tau = collision_frequency(cfg, rho[i], temperature[i]);
    const double p = rho[i] * temperature[i];
    const double mu = p / ((1.0 - cfg.nu) * tau);
    const double kappa = 0.5 * (dim + 2) * p / tau;
    shear[i] = -mu * sigma_factor * du[i];
    heat[i] = -kappa * dT[i];
  }
}

LaxResult lax_test(const LaxConfig& config) {
  LaxResult result;
  result.grid = SpatialGrid{config.nx, -5.0, 5.0, Boundary::FreeFlow};
  result.ref_grid = SpatialGrid{config.ref_nx, -5.0, 5.0, Boundary::FreeFlow};

  ModelConfig cfg;
  cfg.model = Model::ESBGK;
  cfg.eps = config.eps;
  cfg.nu = -0.5;
  cfg.tau_law = TauLaw::Power;
  cfg.tau_coeff = 2.0 / 3.0;

  const VelocityGrid vg = make_velocity_grid(2, config.nv, 20.0);
  const double t_left = 3.528 / 0.445;
  const double t_right = 0.571 / 0.5;

  InitialProfile profile;
  profile.rho = [](double x) { return x < 0.0 ? 0.445 : 0.5; };
  profile.ux = [](double x) { return x < 0.0 ? 0.698 : 0.0; };
  profile.temperature = [=](double x) { return x < 0.0 ? t_left : t_right; };

  SpatialGrid sg = result.grid;
  std::vector<double> tau(sg.nx);
  for (int i = 0; i < sg.nx; ++i)
    tau[i] = cfg.tau_coeff * profile.rho(sg.node(i)) * std::sqrt(profile.temperature(sg.node(i)));
  DistributionField f0 = well_prepared_init(profile, config.eps, tau, vg, sg);

  TimeControls controls;
  controls.cfl = config.cfl;
  controls.speed = vg.vmax;
  controls.t_end = config.t_end;
  RunResult r = run_with_dump(std::move(f0), builtin_scheme(config.scheme), controls, cfg, vg, sg,
                              WenoOrder::W35, config.cache_dir);
  result.kinetic = snapshot_from(r.f, config.t_end, cfg, vg);
  result.shear_kinetic.resize(sg.nx);
  result.heat_kinetic.resize(sg.nx);
  for (int i = 0; i < sg.nx; ++i) {
    result.shear_kinetic[i] = -result.kinetic.fluxes.shear_xx[i] / (1.0 - cfg.nu);
    result.heat_kinetic[i] = -result.kinetic.fluxes.heat_x[i];
  }
  model_closure_curves(result.kinetic.mac.rho, result.kinetic.mac.ux,
                       result.kinetic.mac.temperature, cfg, 2, sg, result.shear_macro,
                       result.heat_macro);

  TransportCoefficients coeffs;
  coeffs.law = TransportCoefficients::Law::LaxMatched;
  coeffs.dim = 2;
  const MacroFields ref0 = piecewise_state(result.ref_grid, 2, 0.0, false, 0.445, 0.698, t_left,
                                           0.5, 0.0, t_right, 2.0 * result.ref_grid.dx());
  const FluidState u0 = macro_to_fluid(ref0);
  result.ns_reference = shock_reference("lax", config.eps, config.ref_nx, config.t_end, coeffs,
                                        result.ref_grid, u0, WenoOrder::W35, config.cache_dir);
  result.euler_reference = shock_reference("lax", 0.0, config.ref_nx, config.t_end, coeffs,
                                           result.ref_grid, u0, WenoOrder::W35, config.cache_dir);

  std::vector<double> ns_u1(config.ref_nx), ns_T(config.ref_nx);
  for (int i = 0; i < config.ref_nx; ++i) {
    ns_u1[i] = result.ns_reference.mx[i] / result.ns_reference.rho[i];
    ns_T[i] = result.ns_reference.temperature(i);
  }
  model_closure_curves(result.ns_reference.rho, ns_u1, ns_T, cfg, 2, result.ref_grid,
                       result.shear_ns, result.heat_ns);
  return result;
}

RelaxOrderResult relaxation_order_study(const std::string& scheme, double eps,
                                        const std::vector<double>& dts, double t_end) {
  const ButcherPair& pair = builtin_scheme(scheme);
  const VelocityGrid vg = make_velocity_grid(1, 64, 10.0);
  SpatialGrid sg{8, 0.0, 1.0, Boundary::Periodic};

  ModelConfig cfg;
  cfg.model = Model::BGK;
  cfg.eps = eps;
  cfg.tau_law = TauLaw::Unit;

  // Homogeneous two-stream data: transport vanishes and the semi-discrete
  // relaxation has the exact exponential solution.
  DistributionField f0(sg.nx, vg.total());
  std::vector<double> bump1(vg.total()), bump2(vg.total());
  maxwellian_node(1.0, 1.0, 0.0, 0.5, vg, bump1.data());
  maxwellian_node(1.0, -1.0, 0.0, 0.5, vg, bump2.data());
  for (int i = 0; i < sg.nx; ++i)
    for (int j = 0; j < vg.total(); ++j) f0(i, j) = 0.5 * (bump1[j] + bump2[j]);

  const MacroFields mac = moments(f0, vg);
  DistributionField meq = maxwellian_field(mac, vg);

  RelaxOrderResult result;
  result.eps = eps;
  result.dts = dts;
  const double decay = std::exp(-t_end / eps);
  for (double dt : dts) {
    TimeControls controls;
    controls.dt_override = dt;
    controls.t_end = t_end;
    RunResult r = run(f0, pair, controls, cfg, vg, sg, WenoOrder::W35);
    double num = 0.0, den = 0.0;
    for (size_t idx = 0; idx < r.f.values.size(); ++idx) {
      const double exact = meq.values[idx] + decay * (f0.values[idx] - meq.values[idx]);
      num += std::abs(r.f.values[idx] - exact);
      den += std::abs(exact);
    }
    result.errors.push_back(num / den);
  }
  for (size_t k = 0; k + 1 < result.errors.size(); ++k)
    result.orders.push_back(std::log2(result.errors[k] / result.errors[k + 1]));
  return result;
}

std::vector<double> inject_to_grid(const std::vector<double>& fine, int coarse_nx) {
  const int stride = static_cast<int>(fine.size()) / coarse_nx;
  if (stride * coarse_nx != static_cast<int>(fine.size()))
    throw IncompatibleGrids("fine grid is not a multiple of the coarse grid");
  std::vector<double> coarse(coarse_nx);
  for (int i = 0; i < coarse_nx; ++i) coarse[i] = fine[static_cast<size_t>(i) * stride];
  return coarse;
}

void write_profile_csv(const std::string& path, const SpatialGrid& sg, const MacroFields& mac) {
  std::vector<std::string> columns = {"x", "rho", "u1"};
  if (mac.dim == 2) columns.push_back("u2");
  columns.insert(columns.end(), {"T", "q1", "sigma11"});
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < sg.nx; ++i) {
    std::vector<double> row = {sg.node(i), mac.rho[i], mac.ux[i]};
    if (mac.dim == 2) row.push_back(mac.uy[i]);
    // sigma11: the nonequilibrium part rho (Theta_11 - T) of the stress.
    row.insert(row.end(),
               {mac.temperature[i], mac.qx[i],
                mac.rho[i] * (mac.theta_xx[i] - mac.temperature[i])});
    rows.push_back(std::move(row));
  }
  write_csv(path, columns, rows);
}

void write_macro_csv(const std::string& path, const SpatialGrid& sg, const MacroFields& mac) {
  std::vector<std::string> columns = {"x", "rho", "ux"};
  if (mac.dim == 2) columns.push_back("uy");
  columns.insert(columns.end(), {"E", "T", "theta_xx"});
  if (mac.dim == 2) columns.insert(columns.end(), {"theta_xy", "theta_yy"});
  columns.push_back("qx");
  if (mac.dim == 2) columns.push_back("qy");
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < sg.nx; ++i) {
    std::vector<double> row = {sg.node(i), mac.rho[i], mac.ux[i]};
    if (mac.dim == 2) row.push_back(mac.uy[i]);
    row.insert(row.end(), {mac.energy[i], mac.temperature[i], mac.theta_xx[i]});
    if (mac.dim == 2) row.insert(row.end(), {mac.theta_xy[i], mac.theta_yy[i]});
    row.push_back(mac.qx[i]);
    if (mac.dim == 2) row.push_back(mac.qy[i]);
    rows.push_back(std::move(row));
  }
  write_csv(path, columns, rows);
}

void write_fluid_profile_csv(const std::string& path, const SpatialGrid& sg, const FluidState& u) {
  std::vector<std::string> columns = {"x", "rho", "u1"};
  if (u.dim == 2) columns.push_back("u2");
  columns.push_back("T");
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < sg.nx; ++i) {
    std::vector<double> row = {sg.node(i), u.rho[i], u.mx[i] / u.rho[i]};
    if (u.dim == 2) row.push_back(u.my[i] / u.rho[i]);
    row.push_back(u.temperature(i));
    rows.push_back(std::move(row));
  }
  write_csv(path, columns, rows);
}

}  // namespace kinetic
