#include "setler/core.hpp"

#include <cmath>
#include <numbers>

namespace setler {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace

SphericalState::SphericalState(double alpha_, double delta_, double r_)
    : alpha(alpha_), delta(delta_), r(r_) {
    require_finite(alpha, "alpha");
    require_finite(delta, "delta");
    require_finite(r, "r");
}

SetlerParams::SetlerParams(double lambda_, double beta_, double gamma_,
                           double delta_f_, double omega_)
    : lambda(lambda_), beta(beta_), gamma(gamma_), delta_f(delta_f_), omega(omega_) {
    require_finite(lambda, "lambda");
    require_finite(beta, "beta");
    require_finite(gamma, "gamma");
    require_finite(delta_f, "delta_f");
    require_finite(omega, "omega");
}

TimeGrid::TimeGrid(double t0_, double t1_, double h_) : t0(t0_), t1(t1_), h(h_) {
    require_finite(t0, "t0");
    require_finite(t1, "t1");
    require_finite(h, "h");
    if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must exceed t0");
    if (!(h > 0.0)) throw std::invalid_argument("TimeGrid: h must be positive");
}

std::size_t TimeGrid::steps() const {
    return static_cast<std::size_t>(std::floor((t1 - t0) / h + 1e-9));
}

Trajectory::Trajectory(std::vector<double> times, std::vector<SphericalState> states)
    : times_(std::move(times)), states_(std::move(states)) {
    if (times_.empty()) throw std::invalid_argument("Trajectory: empty");
    if (times_.size() != states_.size())
        throw std::invalid_argument("Trajectory: times/states length mismatch");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("Trajectory: times must strictly increase");
}

CartesianState spherical_to_cartesian(const SphericalState& s) {
    const double cd = std::cos(s.delta);
    return {s.r * cd * std::cos(s.alpha), s.r * cd * std::sin(s.alpha),
            s.r * std::sin(s.delta)};
}

double wrap_angle(double alpha) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(alpha, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;  // fmod gave -tiny and the add rounded up
    return w;
}

SphericalState wrap_state(const SphericalState& s) {
    return {wrap_angle(s.alpha), s.delta, s.r};
}

bool all_finite(const SphericalState& s) {
    return std::isfinite(s.alpha) && std::isfinite(s.delta) && std::isfinite(s.r);
}

}  // namespace setler
