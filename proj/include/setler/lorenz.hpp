#pragma once

#include <string>
#include <variant>
#include <vector>

#include "setler/continuous.hpp"
#include "setler/core.hpp"

namespace setler {

struct LorenzParams {
    double sigma;
    double rho;
    double beta_l;

    LorenzParams(double sigma_, double rho_, double beta_l_);
};

// (sigma (y-x), x (rho-z) - y, x y - beta_l z)
Vec3 lorenz_field(const Vec3& state, const LorenzParams& p);

// Everything needed to reproduce a sampled cloud, including re-deriving its
// largest Lyapunov exponent.
struct CloudMeta {
    std::string system;  // "lorenz" or "setler"
    std::variant<LorenzParams, SetlerParams> params;
    Vec3 s0;
    TimeGrid grid;
    double transient;
    double h() const { return grid.h; }
};

struct PointCloud {
    std::vector<Vec3> points;
    CloudMeta meta;
};

// RK4-integrated post-transient samples. The Setler overload emits points in
// Cartesian coordinates via the spherical conversion.
PointCloud attractor_sample(const LorenzParams& p, const Vec3& s0,
                            const TimeGrid& grid, double transient);
PointCloud attractor_sample(const SetlerParams& p, const SphericalState& s0,
                            const TimeGrid& grid, double transient);

struct Extents {
    Vec3 min{0.0, 0.0, 0.0};
    Vec3 max{0.0, 0.0, 0.0};
};

Extents bounding_box(const PointCloud& cloud);

struct ComparisonReport {
    Extents bbox_a;
    Extents bbox_b;
    double largest_lyapunov_a = 0.0;
    double largest_lyapunov_b = 0.0;
    // no automated shape judgment; lobe structure is left to inspection of
    // the emitted point clouds
    std::string lobe_note;
};

ComparisonReport compare_attractors(const PointCloud& a, const PointCloud& b);

}  // namespace setler
