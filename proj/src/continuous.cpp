#include "setler/continuous.hpp"

#include <cmath>

namespace setler {

Derivative vector_field(const SphericalState& s, double tau, const SetlerParams& p) {
    const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
    const double sd = std::sin(s.delta), cd = std::cos(s.delta);
    const double phase = p.omega * tau;
    const double sdca = sd * ca;
    return {p.lambda * sa * cd + p.beta * std::sin(phase),
            p.lambda * ca * sd + p.gamma * std::cos(phase),
            p.lambda * sdca * sdca + p.delta_f * std::sin(phase)};
}

SphericalState euler_discretize(const SphericalState& s, double tau, double dtau,
                                const SetlerParams& p) {
    const Derivative d = vector_field(s, tau, p);
    return {s.alpha + dtau * d.d_alpha, s.delta + dtau * d.d_delta,
            s.r + dtau * d.d_r};
}

SphericalState rk4_step(const SphericalState& s, double tau, double h,
                        const SetlerParams& p) {
    return rk4_step_with(
        [&p](const SphericalState& y, double t) { return vector_field(y, t, p); }, s,
        tau, h);
}

Trajectory integrate(const SphericalState& s0, const TimeGrid& grid,
                     const SetlerParams& p) {
    return integrate_with(
        [&p](const SphericalState& y, double t) { return vector_field(y, t, p); }, s0,
        grid);
}

}  // namespace setler
