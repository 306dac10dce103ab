#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace setler {

// State of the positional system: right ascension alpha, declination delta,
// radial distance r. All components must be finite; no angle wrapping is
// applied on construction (long runs use unwrapped angles).
struct SphericalState {
    double alpha;
    double delta;
    double r;

    SphericalState(double alpha_, double delta_, double r_);
};

struct CartesianState {
    double x;
    double y;
    double z;
};

// Parameters of the forced system. The r-equation forcing amplitude is
// named delta_f to keep it distinct from the declination component delta.
// omega == 0 is allowed (constant forcing phase).
struct SetlerParams {
    double lambda;
    double beta;
    double gamma;
    double delta_f;
    double omega;

    SetlerParams(double lambda_, double beta_, double gamma_, double delta_f_,
                 double omega_);
};

// Uniform integration grid; nodes are t0 + k*h for k = 0..steps().
struct TimeGrid {
    double t0;
    double t1;
    double h;

    TimeGrid(double t0_, double t1_, double h_);

    // floor((t1-t0)/h), with a small slack so exact spans are not lost to
    // representation error of h.
    std::size_t steps() const;
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
};

// Time-indexed state sequence. Times strictly increase, lengths match,
// never empty.
class Trajectory {
  public:
    Trajectory(std::vector<double> times, std::vector<SphericalState> states);

    const std::vector<double>& times() const { return times_; }
    const std::vector<SphericalState>& states() const { return states_; }
    std::size_t size() const { return times_.size(); }
    const SphericalState& back() const { return states_.back(); }

  private:
    std::vector<double> times_;
    std::vector<SphericalState> states_;
};

// Thrown when a run leaves the finite domain. Carries the last finite step
// index and time, and (when available) the finite prefix of the run so
// callers can keep partial output.
class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(const std::string& what, std::size_t last_finite_index,
                    double last_finite_time,
                    std::shared_ptr<const Trajectory> partial = nullptr)
        : std::runtime_error(what),
          index_(last_finite_index),
          time_(last_finite_time),
          partial_(std::move(partial)) {}

    std::size_t last_finite_index() const noexcept { return index_; }
    double last_finite_time() const noexcept { return time_; }
    const Trajectory* partial() const noexcept { return partial_.get(); }

  private:
    std::size_t index_;
    double time_;
    std::shared_ptr<const Trajectory> partial_;
};

// x = r cos(delta) cos(alpha), y = r cos(delta) sin(alpha), z = r sin(delta)
CartesianState spherical_to_cartesian(const SphericalState& s);

// alpha mapped into [0, 2*pi); delta and r untouched. Idempotent.
SphericalState wrap_state(const SphericalState& s);
double wrap_angle(double alpha);

bool all_finite(const SphericalState& s);

}  // namespace setler
