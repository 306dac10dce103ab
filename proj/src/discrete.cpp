#include "setler/discrete.hpp"

#include <cmath>
#include <string>

#include "setler/continuous.hpp"

namespace setler {

namespace {

Vec3 forced_step_raw(const SphericalState& s, const SetlerParams& p, double n) {
    const Derivative d = vector_field(s, n, p);
    return {s.alpha + d.d_alpha, s.delta + d.d_delta, s.r + d.d_r};
}

}  // namespace

LinearIncrements::LinearIncrements(double d_alpha_, double d_delta_, double d_r_)
    : d_alpha(d_alpha_), d_delta(d_delta_), d_r(d_r_) {
    if (!std::isfinite(d_alpha) || !std::isfinite(d_delta) || !std::isfinite(d_r))
        throw std::invalid_argument("LinearIncrements must be finite");
}

SphericalState linear_step(const SphericalState& s, const LinearIncrements& inc,
                           double lambda) {
    return {s.alpha + lambda * inc.d_alpha, s.delta + lambda * inc.d_delta,
            s.r + lambda * inc.d_r};
}

NonlinearTerms nonlinear_terms(const SphericalState& s, double lambda) {
    const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
    const double sd = std::sin(s.delta), cd = std::cos(s.delta);
    const double sdca = sd * ca;
    return {lambda * sa * cd, lambda * ca * sd, lambda * sdca * sdca};
}

SphericalState forced_step(const SphericalState& s, const SetlerParams& p,
                           std::uint64_t n) {
    const Vec3 v = forced_step_raw(s, p, static_cast<double>(n));
    return {v[0], v[1], v[2]};
}

Trajectory iterate_map(const SphericalState& s0, const SetlerParams& p,
                       std::size_t n_steps) {
    std::vector<double> times;
    std::vector<SphericalState> states;
    times.reserve(n_steps + 1);
    states.reserve(n_steps + 1);
    times.push_back(0.0);
    states.push_back(s0);
    SphericalState s = s0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const Vec3 v = forced_step_raw(s, p, static_cast<double>(n));
        if (!all_finite(v)) {
            auto partial =
                std::make_shared<Trajectory>(std::move(times), std::move(states));
            throw DivergenceError("iterate_map: non-finite state at step " +
                                      std::to_string(n + 1) +
                                      "; last finite step " + std::to_string(n),
                                  n, static_cast<double>(n), partial);
        }
        s = SphericalState{v[0], v[1], v[2]};
        times.push_back(static_cast<double>(n + 1));
        states.push_back(s);
    }
    return Trajectory(std::move(times), std::move(states));
}

}  // namespace setler
