#include "kinetic/transport.hpp"

#include <cmath>
#include <vector>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

constexpr double kWenoEps = 1e-6;  // Jiang-Shu smoothness regularization

// Left-biased fifth-order flux at the interface right of the center value z.
// Mirroring the argument order gives the right-biased reconstruction.
inline double flux5(double m2, double m1, double z, double p1, double p2, WenoWeights weights) {
  const double h0 = (2.0 * m2 - 7.0 * m1 + 11.0 * z) / 6.0;
  const double h1 = (-m1 + 5.0 * z + 2.0 * p1) / 6.0;
  const double h2 = (2.0 * z + 5.0 * p1 - p2) / 6.0;
  if (weights == WenoWeights::Linear) return 0.1 * h0 + 0.6 * h1 + 0.3 * h2;
  const double b0 = (13.0 / 12.0) * (m2 - 2.0 * m1 + z) * (m2 - 2.0 * m1 + z) +
                    0.25 * (m2 - 4.0 * m1 + 3.0 * z) * (m2 - 4.0 * m1 + 3.0 * z);
  const double b1 = (13.0 / 12.0) * (m1 - 2.0 * z + p1) * (m1 - 2.0 * z + p1) +
                    0.25 * (m1 - p1) * (m1 - p1);
  const double b2 = (13.0 / 12.0) * (z - 2.0 * p1 + p2) * (z - 2.0 * p1 + p2) +
                    0.25 * (3.0 * z - 4.0 * p1 + p2) * (3.0 * z - 4.0 * p1 + p2);
  const double a0 = 0.1 / ((kWenoEps + b0) * (kWenoEps + b0));
  const double a1 = 0.6 / ((kWenoEps + b1) * (kWenoEps + b1));
  const double a2 = 0.3 / ((kWenoEps + b2) * (kWenoEps + b2));
  return (a0 * h0 + a1 * h1 + a2 * h2) / (a0 + a1 + a2);
}

// Left-biased third-order flux (two stencils).
inline double flux3(double m1, double z, double p1, WenoWeights weights) {
  const double h0 = 0.5 * (-m1 + 3.0 * z);
  const double h1 = 0.5 * (z + p1);
  if (weights == WenoWeights::Linear) return (h0 + 2.0 * h1) / 3.0;
  const double b0 = (z - m1) * (z - m1);
  const double b1 = (p1 - z) * (p1 - z);
  const double a0 = (1.0 / 3.0) / ((kWenoEps + b0) * (kWenoEps + b0));
  const double a1 = (2.0 / 3.0) / ((kWenoEps + b1) * (kWenoEps + b1));
  return (a0 * h0 + a1 * h1) / (a0 + a1);
}

void fill_ghosts(std::span<const double> slice, Boundary boundary, int gw, std::vector<double>& buf) {
  const int nx = static_cast<int>(slice.size());
  for (int i = 0; i < nx; ++i) buf[gw + i] = slice[i];
  if (boundary == Boundary::Periodic) {
    for (int k = 1; k <= gw; ++k) {
      buf[gw - k] = slice[nx - k];
      buf[gw + nx - 1 + k] = slice[k - 1];
    }
  } else {
    for (int k = 1; k <= gw; ++k) {
      buf[gw - k] = slice[0];
      buf[gw + nx - 1 + k] = slice[nx - 1];
    }
  }
}

void weno_on_buffer(const std::vector<double>& buf, int nx, int gw, double wind, double dx,
                    WenoOrder order, WenoWeights weights, std::vector<double>& flux,
                    std::span<double> out) {
  const double* g = buf.data() + gw;  // g[-gw .. nx-1+gw]
  // F[i] approximates the flux at the interface between cells i and i+1,
  // for i = -1 .. nx-1; out[i] = (F[i] - F[i-1]) / dx.
  flux.resize(nx + 1);
  if (order == WenoOrder::W35) {
    if (wind >= 0.0) {
      for (int i = -1; i < nx; ++i)
        flux[i + 1] = flux5(g[i - 2], g[i - 1], g[i], g[i + 1], g[i + 2], weights);
    } else {
      for (int i = -1; i < nx; ++i)
        flux[i + 1] = flux5(g[i + 3], g[i + 2], g[i + 1], g[i], g[i - 1], weights);
    }
  } else {
    if (wind >= 0.0) {
      for (int i = -1; i < nx; ++i) flux[i + 1] = flux3(g[i - 1], g[i], g[i + 1], weights);
    } else {
      for (int i = -1; i < nx; ++i) flux[i + 1] = flux3(g[i + 2], g[i + 1], g[i], weights);
    }
  }
  const double inv_dx = 1.0 / dx;
  for (int i = 0; i < nx; ++i) out[i] = (flux[i + 1] - flux[i]) * inv_dx;
}

}  // namespace

void weno_derivative(std::span<const double> slice, double wind, double dx, WenoOrder order,
                     Boundary boundary, std::span<double> out, WenoWeights weights) {
  const int nx = static_cast<int>(slice.size());
  const int gw = weno_ghost_width(order);
  const int min_nx = (order == WenoOrder::W35) ? 5 : 3;
  if (nx < min_nx) throw GridTooSmall("slice shorter than the reconstruction stencil");
  std::vector<double> buf(nx + 2 * gw);
  std::vector<double> flux;
  fill_ghosts(slice, boundary, gw, buf);
  weno_on_buffer(buf, nx, gw, wind, dx, order, weights, flux, out);
}

namespace {

template <bool Parallel>
DistributionField transport_impl(const DistributionField& f, const VelocityGrid& vg,
                                 const SpatialGrid& sg, WenoOrder order) {
  const int nx = f.nx;
  const int nv = f.nv;
  const int gw = weno_ghost_width(order);
  const int min_nx = (order == WenoOrder::W35) ? 5 : 3;
  if (nx < min_nx) throw GridTooSmall("spatial grid shorter than the reconstruction stencil");
  DistributionField out(nx, nv);
  const double dx = sg.dx();

#pragma omp parallel if (Parallel)
  {
    std::vector<double> buf(nx + 2 * gw);
    std::vector<double> column(nx);
    std::vector<double> deriv(nx);
    std::vector<double> flux;
#pragma omp for schedule(static)
    for (int j = 0; j < nv; ++j) {
      const double v1 = vg.vx[j];
      if (v1 == 0.0) {
        for (int i = 0; i < nx; ++i) out(i, j) = 0.0;
        continue;
      }
      for (int i = 0; i < nx; ++i) column[i] = f(i, j);
      fill_ghosts(column, sg.boundary, gw, buf);
      weno_on_buffer(buf, nx, gw, v1, dx, order, WenoWeights::Nonlinear, flux, deriv);
      for (int i = 0; i < nx; ++i) out(i, j) = v1 * deriv[i];
    }
  }
  return out;
}

}  // namespace

DistributionField transport_term(const DistributionField& f, const VelocityGrid& vg,
                                 const SpatialGrid& sg, WenoOrder order) {
  return transport_impl<true>(f, vg, sg, order);
}

namespace ref {

DistributionField transport_term(const DistributionField& f, const VelocityGrid& vg,
                                 const SpatialGrid& sg, WenoOrder order) {
  return transport_impl<false>(f, vg, sg, order);
}

}  // namespace ref

std::vector<double> central_derivative(std::span<const double> values, const SpatialGrid& sg) {
  const int nx = static_cast<int>(values.size());
  if (nx < 5) throw GridTooSmall("central derivative needs at least 5 nodes");
  std::vector<double> buf(nx + 4);
  fill_ghosts(values, sg.boundary, 2, buf);
  const double* g = buf.data() + 2;
  std::vector<double> out(nx);
  const double s = 1.0 / (12.0 * sg.dx());
  for (int i = 0; i < nx; ++i)
    out[i] = (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) * s;
  return out;
}

DistributionField central_x_derivative(const DistributionField& f, const SpatialGrid& sg) {
  const int nx = f.nx;
  const int nv = f.nv;
  if (nx < 5) throw GridTooSmall("central derivative needs at least 5 nodes");
  DistributionField out(nx, nv);
  const double s = 1.0 / (12.0 * sg.dx());
#pragma omp parallel
  {
    std::vector<double> buf(nx + 4);
    std::vector<double> column(nx);
#pragma omp for schedule(static)
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nx; ++i) column[i] = f(i, j);
      fill_ghosts(column, sg.boundary, 2, buf);
      const double* g = buf.data() + 2;
      for (int i = 0; i < nx; ++i)
        out(i, j) = (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) * s;
    }
  }
  return out;
}

}  // namespace kinetic
