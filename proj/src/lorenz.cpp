#include "setler/lorenz.hpp"

#include <cmath>

#include "setler/analysis.hpp"

namespace setler {

LorenzParams::LorenzParams(double sigma_, double rho_, double beta_l_)
    : sigma(sigma_), rho(rho_), beta_l(beta_l_) {
    for (double v : {sigma, rho, beta_l})
        if (!std::isfinite(v))
            throw std::invalid_argument("LorenzParams must be finite");
    if (beta_l == 0.0)
        throw std::invalid_argument("LorenzParams: beta_l must be nonzero");
}

Vec3 lorenz_field(const Vec3& s, const LorenzParams& p) {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1],
            s[0] * s[1] - p.beta_l * s[2]};
}

namespace {

// keep nodes with (tau - t0) strictly past the transient; the sample at
// exactly the transient boundary is discarded
bool keep_node(double offset, double transient, double h) {
    return offset > transient + 1e-9 * h;
}

template <class Field>
std::vector<Vec3> sample_field(Field&& field, Vec3 y, const TimeGrid& grid,
                               double transient) {
    if (!(transient < grid.t1 - grid.t0))
        throw std::invalid_argument("attractor_sample: transient must be shorter "
                                    "than the grid span");
    const std::size_t n = grid.steps();
    std::vector<Vec3> pts;
    for (std::size_t k = 0; k < n; ++k) {
        y = rk4_step_vec(field, y, grid.time_at(k), grid.h);
        if (!all_finite(y))
            throw DivergenceError("attractor_sample: blow-up", k, grid.time_at(k));
        const double offset = static_cast<double>(k + 1) * grid.h;
        if (keep_node(offset, transient, grid.h)) pts.push_back(y);
    }
    if (pts.empty())
        throw std::invalid_argument("attractor_sample: no samples retained");
    return pts;
}

}  // namespace

PointCloud attractor_sample(const LorenzParams& p, const Vec3& s0,
                            const TimeGrid& grid, double transient) {
    auto field = [&p](const Vec3& y, double) { return lorenz_field(y, p); };
    PointCloud cloud{sample_field(field, s0, grid, transient),
                     CloudMeta{"lorenz", p, s0, grid, transient}};
    return cloud;
}

PointCloud attractor_sample(const SetlerParams& p, const SphericalState& s0,
                            const TimeGrid& grid, double transient) {
    auto field = [&p](const Vec3& y, double t) -> Vec3 {
        const Derivative d = vector_field(SphericalState{y[0], y[1], y[2]}, t, p);
        return {d.d_alpha, d.d_delta, d.d_r};
    };
    std::vector<Vec3> spherical =
        sample_field(field, Vec3{s0.alpha, s0.delta, s0.r}, grid, transient);
    std::vector<Vec3> cartesian;
    cartesian.reserve(spherical.size());
    for (const Vec3& s : spherical) {
        const CartesianState c = spherical_to_cartesian({s[0], s[1], s[2]});
        cartesian.push_back({c.x, c.y, c.z});
    }
    return PointCloud{std::move(cartesian),
                      CloudMeta{"setler", p, {s0.alpha, s0.delta, s0.r}, grid,
                                transient}};
}

Extents bounding_box(const PointCloud& cloud) {
    if (cloud.points.empty())
        throw std::invalid_argument("bounding_box: empty cloud");
    Extents e{cloud.points.front(), cloud.points.front()};
    for (const Vec3& p : cloud.points)
        for (int i = 0; i < 3; ++i) {
            e.min[i] = std::min(e.min[i], p[i]);
            e.max[i] = std::max(e.max[i], p[i]);
        }
    return e;
}

namespace {

double cloud_exponent(const CloudMeta& meta) {
    const BenettinOptions opt{1e-8, 10, meta.transient};
    if (std::holds_alternative<LorenzParams>(meta.params)) {
        const LorenzParams& lp = std::get<LorenzParams>(meta.params);
        auto field = [&lp](const Vec3& y, double) { return lorenz_field(y, lp); };
        return benettin_exponent(field, meta.s0, meta.grid, opt);
    }
    const SetlerParams& sp = std::get<SetlerParams>(meta.params);
    auto field = [&sp](const Vec3& y, double t) -> Vec3 {
        const Derivative d = vector_field(SphericalState{y[0], y[1], y[2]}, t, sp);
        return {d.d_alpha, d.d_delta, d.d_r};
    };
    return benettin_exponent(field, meta.s0, meta.grid, opt);
}

}  // namespace

ComparisonReport compare_attractors(const PointCloud& a, const PointCloud& b) {
    if (a.points.empty() || b.points.empty())
        throw std::invalid_argument("compare_attractors: empty cloud");
    ComparisonReport rep;
    rep.bbox_a = bounding_box(a);
    rep.bbox_b = bounding_box(b);
    rep.largest_lyapunov_a = cloud_exponent(a.meta);
    rep.largest_lyapunov_b = cloud_exponent(b.meta);
    rep.lobe_note = "lobe structure not judged automatically; inspect the "
                    "emitted point clouds";
    return rep;
}

}  // namespace setler
