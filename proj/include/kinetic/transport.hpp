#ifndef KINETIC_TRANSPORT_HPP_
#define KINETIC_TRANSPORT_HPP_

#include <span>

#include "kinetic/grid.hpp"

namespace kinetic {

enum class WenoOrder { W23, W35 };

// Nonlinear weights are the production path; the linear (ideal) weights are
// kept for polynomial-exactness checks of the underlying stencils.
enum class WenoWeights { Nonlinear, Linear };

inline int weno_ghost_width(WenoOrder order) { return order == WenoOrder::W35 ? 3 : 2; }

// Upwind conservative WENO derivative of a 1D slice. wind >= 0 selects the
// left-biased stencil family, wind < 0 the mirrored one. Throws GridTooSmall
// when the slice cannot host one stencil.
void weno_derivative(std::span<const double> slice, double wind, double dx, WenoOrder order,
                     Boundary boundary, std::span<double> out,
                     WenoWeights weights = WenoWeights::Nonlinear);

// v_1 df/dx per velocity node (components beyond the first do not advect in
// one space dimension).
DistributionField transport_term(const DistributionField& f, const VelocityGrid& vg,
                                 const SpatialGrid& sg, WenoOrder order);

namespace ref {
DistributionField transport_term(const DistributionField& f, const VelocityGrid& vg,
                                 const SpatialGrid& sg, WenoOrder order);
}

// Fourth-order central first derivative along x of every velocity column
// (used for viscous terms and for numerical initial-data derivatives).
DistributionField central_x_derivative(const DistributionField& f, const SpatialGrid& sg);

// Same stencil on a plain nodal field.
std::vector<double> central_derivative(std::span<const double> values, const SpatialGrid& sg);

}  // namespace kinetic

#endif  // KINETIC_TRANSPORT_HPP_
