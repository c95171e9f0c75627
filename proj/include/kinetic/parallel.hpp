#ifndef KINETIC_PARALLEL_HPP_
#define KINETIC_PARALLEL_HPP_

namespace kinetic {

// Applies the KINETIC_THREADS env var (0 or unset = OpenMP default).
// Returns the worker count that will be used.
int configure_threads();

int max_threads();

}  // namespace kinetic

#endif  // KINETIC_PARALLEL_HPP_
