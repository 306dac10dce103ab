#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "setler/core.hpp"

namespace setler {

using Vec3 = std::array<double, 3>;

inline bool all_finite(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// Time derivatives of (alpha, delta, r) per unit tau.
struct Derivative {
    double d_alpha;
    double d_delta;
    double d_r;
};

// d(alpha)/dtau = lambda sin(alpha) cos(delta) + beta sin(omega tau)
// d(delta)/dtau = lambda cos(alpha) sin(delta) + gamma cos(omega tau)
// dr/dtau      = lambda (sin(delta) cos(alpha))^2 + delta_f sin(omega tau)
Derivative vector_field(const SphericalState& s, double tau, const SetlerParams& p);

// x_{n+1} = x_n + dtau * F(x_n, tau_n). With dtau = 1 and tau = n this is
// the forced discrete map, bit for bit.
SphericalState euler_discretize(const SphericalState& s, double tau, double dtau,
                                const SetlerParams& p);

// Classical fixed-step RK4 on a generic 3-vector field f(y, t) -> Vec3.
template <class Field>
Vec3 rk4_step_vec(Field&& f, const Vec3& y, double t, double h) {
    Vec3 k1, k2, k3, k4, tmp;
    k1 = f(y, t);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    k2 = f(tmp, t + 0.5 * h);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    k3 = f(tmp, t + 0.5 * h);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * k3[i];
    k4 = f(tmp, t + h);
    Vec3 out;
    for (int i = 0; i < 3; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// RK4 step for a field expressed on SphericalState. Intermediate stages are
// checked for finiteness before each field evaluation; a non-finite stage
// raises DivergenceError. h = 0 returns s unchanged.
template <class Field>
SphericalState rk4_step_with(Field&& f, const SphericalState& s, double tau, double h) {
    if (h == 0.0) return s;
    auto vec_field = [&](const Vec3& y, double t) -> Vec3 {
        if (!all_finite(y))
            throw DivergenceError("rk4_step: non-finite intermediate state", 0, tau);
        const Derivative d = f(SphericalState{y[0], y[1], y[2]}, t);
        return {d.d_alpha, d.d_delta, d.d_r};
    };
    const Vec3 out = rk4_step_vec(vec_field, Vec3{s.alpha, s.delta, s.r}, tau, h);
    if (!all_finite(out))
        throw DivergenceError("rk4_step: non-finite result", 0, tau);
    return {out[0], out[1], out[2]};
}

SphericalState rk4_step(const SphericalState& s, double tau, double h,
                        const SetlerParams& p);

// Integrates over every node of the grid. On mid-run blow-up throws
// DivergenceError carrying the last finite tau and the finite prefix.
template <class Field>
Trajectory integrate_with(Field&& f, const SphericalState& s0, const TimeGrid& grid) {
    const std::size_t n = grid.steps();
    std::vector<double> times;
    std::vector<SphericalState> states;
    times.reserve(n + 1);
    states.reserve(n + 1);
    times.push_back(grid.time_at(0));
    states.push_back(s0);
    SphericalState s = s0;
    for (std::size_t k = 0; k < n; ++k) {
        const double tau = grid.time_at(k);
        try {
            s = rk4_step_with(f, s, tau, grid.h);
        } catch (const DivergenceError&) {
            auto partial = std::make_shared<Trajectory>(std::move(times), std::move(states));
            throw DivergenceError("integrate: blow-up after tau = " +
                                      std::to_string(tau),
                                  k, tau, partial);
        }
        times.push_back(grid.time_at(k + 1));
        states.push_back(s);
    }
    return Trajectory(std::move(times), std::move(states));
}

Trajectory integrate(const SphericalState& s0, const TimeGrid& grid,
                     const SetlerParams& p);

}  // namespace setler
