// Timing comparison of the OpenMP kernels against their serial reference
// implementations on a representative 1D x 2V workload.

#include <chrono>
#include <cstdio>
#include <random>

#include "kinetic/equilibrium.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/parallel.hpp"
#include "kinetic/transport.hpp"

using namespace kinetic;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int repeats) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int r = 0; r < repeats; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

}  // namespace

int main() {
  const int threads = configure_threads();
  const int nx = 200;
  const int nv = 48;
  SpatialGrid sg{nx, -1.0, 2.0, Boundary::FreeFlow};
  VelocityGrid vg = make_velocity_grid(2, nv, 15.0);

  MacroFields mac(nx, 2);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < nx; ++i) {
    mac.rho[i] = 0.5 + d(rng);
    mac.ux[i] = 2.0 * d(rng) - 1.0;
    mac.uy[i] = 2.0 * d(rng) - 1.0;
    mac.temperature[i] = 0.5 + d(rng);
    mac.theta_xx[i] = mac.temperature[i] * (1.0 + 0.2 * (d(rng) - 0.5));
    mac.theta_xy[i] = 0.05 * (d(rng) - 0.5) * mac.temperature[i];
    mac.theta_yy[i] = mac.temperature[i] * (1.0 + 0.2 * (d(rng) - 0.5));
  }
  DistributionField f = es_gaussian_field(mac, -0.5, vg);

  const int repeats = 5;
  struct Row {
    const char* name;
    double par_ms;
    double ser_ms;
  };
  Row rows[] = {
      {"transport_term (W35)",
       time_ms([&] { transport_term(f, vg, sg, WenoOrder::W35); }, repeats),
       time_ms([&] { ref::transport_term(f, vg, sg, WenoOrder::W35); }, repeats)},
      {"moments",
       time_ms([&] { moments(f, vg); }, repeats),
       time_ms([&] { ref::moments(f, vg); }, repeats)},
      {"es_gaussian_field",
       time_ms([&] { es_gaussian_field(mac, -0.5, vg); }, repeats),
       time_ms([&] { ref::es_gaussian_field(mac, -0.5, vg); }, repeats)},
  };

  std::printf("grid: nx=%d, nv=%dx%d, threads=%d\n", nx, nv, nv, threads);
  std::printf("%-24s %12s %12s %9s\n", "kernel", "openmp [ms]", "serial [ms]", "speedup");
  for (const Row& r : rows)
    std::printf("%-24s %12.3f %12.3f %8.2fx\n", r.name, r.par_ms, r.ser_ms, r.ser_ms / r.par_ms);

  // The reference implementations must agree exactly.
  DistributionField a = transport_term(f, vg, sg, WenoOrder::W35);
  DistributionField b = ref::transport_term(f, vg, sg, WenoOrder::W35);
  for (size_t k = 0; k < a.values.size(); ++k) {
    if (a.values[k] != b.values[k]) {
      std::printf("MISMATCH in transport kernels at %zu\n", k);
      return 1;
    }
  }
  std::printf("parallel and serial kernels agree bitwise\n");
  return 0;
}
