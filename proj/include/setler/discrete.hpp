#pragma once

#include <cstdint>

#include "setler/core.hpp"

namespace setler {

// Per-step increments of the linear baseline model.
struct LinearIncrements {
    double d_alpha;
    double d_delta;
    double d_r;

    LinearIncrements(double d_alpha_, double d_delta_, double d_r_);
};

struct NonlinearTerms {
    double f;
    double g;
    double h;
};

// Each component advanced by lambda times its increment.
SphericalState linear_step(const SphericalState& s, const LinearIncrements& inc,
                           double lambda);

// f = lambda sin(alpha) cos(delta)
// g = lambda cos(alpha) sin(delta)
// h = lambda (sin(delta) cos(alpha))^2
NonlinearTerms nonlinear_terms(const SphericalState& s, double lambda);

// alpha' = alpha + lambda sin(alpha) cos(delta) + beta sin(omega n)
// delta' = delta + lambda cos(alpha) sin(delta) + gamma cos(omega n)
// r'     = r + lambda (sin(delta) cos(alpha))^2 + delta_f sin(omega n)
// Evaluated as the unit-step Euler bridge so that euler_discretize with
// dtau = 1 at tau = n reproduces it bitwise.
SphericalState forced_step(const SphericalState& s, const SetlerParams& p,
                           std::uint64_t n);

// Repeated forced_step; times are step indices 0..n_steps. Halts on the
// first non-finite component with DivergenceError carrying the last finite
// step index and the finite prefix.
Trajectory iterate_map(const SphericalState& s0, const SetlerParams& p,
                       std::size_t n_steps);

}  // namespace setler
