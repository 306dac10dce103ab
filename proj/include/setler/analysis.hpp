#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "setler/continuous.hpp"
#include "setler/core.hpp"

namespace setler {

// Scalar map x -> f(x, a). df is the analytic derivative; when absent the
// estimator falls back to a central finite difference.
struct Map1d {
    std::function<double(double, double)> f;
    std::function<double(double, double)> df;
};

struct LyapunovEstimate {
    double exponent = 0.0;
    long n = 0;
    long transient = 0;
    std::string method;
    std::vector<std::string> warnings;
};

// Mean of log|f'(x_k, a)| over the post-transient orbit x_tr..x_{n-1},
// normalized by the n - tr retained points. Derivatives that are exactly
// zero are floored at 1e-300 and recorded as warnings.
LyapunovEstimate lyapunov_1d(const Map1d& map, double x0, double a, long n,
                             long transient);

struct BenettinOptions {
    double d0 = 1e-8;
    int renorm_every = 10;
    double transient = 0.0;  // pre-integration time before measuring
};

// Largest-exponent estimate from two trajectories renormalized to d0 every
// renorm_every steps; works for any 3-vector field f(y, t) -> Vec3.
template <class Field>
double benettin_exponent(Field&& field, Vec3 y, const TimeGrid& grid,
                         const BenettinOptions& opt) {
    if (!(opt.d0 > 0.0)) throw std::invalid_argument("benettin: d0 must be positive");
    if (opt.renorm_every < 1)
        throw std::invalid_argument("benettin: renorm_every must be >= 1");
    double t = grid.t0;
    const auto n_trans = static_cast<std::size_t>(std::llround(opt.transient / grid.h));
    for (std::size_t k = 0; k < n_trans; ++k) {
        y = rk4_step_vec(field, y, t, grid.h);
        t += grid.h;
        if (!all_finite(y)) throw DivergenceError("benettin: transient blow-up", k, t);
    }
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    Vec3 yp{y[0] + opt.d0 * inv_sqrt3, y[1] + opt.d0 * inv_sqrt3,
            y[2] + opt.d0 * inv_sqrt3};
    const auto n_steps =
        static_cast<std::size_t>(std::floor((grid.t1 - t) / grid.h + 1e-9));
    double acc = 0.0;
    std::size_t windows = 0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        y = rk4_step_vec(field, y, t, grid.h);
        yp = rk4_step_vec(field, yp, t, grid.h);
        t += grid.h;
        if (!all_finite(y) || !all_finite(yp))
            throw DivergenceError("benettin: trajectory blow-up", k, t);
        if ((k + 1) % static_cast<std::size_t>(opt.renorm_every) == 0) {
            Vec3 diff{yp[0] - y[0], yp[1] - y[1], yp[2] - y[2]};
            const double dist = std::sqrt(diff[0] * diff[0] + diff[1] * diff[1] +
                                          diff[2] * diff[2]);
            if (dist == 0.0)
                throw std::runtime_error("benettin: trajectories collapsed");
            acc += std::log(dist / opt.d0);
            const double scale = opt.d0 / dist;
            for (int i = 0; i < 3; ++i) yp[i] = y[i] + scale * diff[i];
            ++windows;
        }
    }
    if (windows == 0)
        throw std::invalid_argument("benettin: grid too short for one window");
    return acc / (static_cast<double>(windows) * opt.renorm_every * grid.h);
}

LyapunovEstimate lyapunov_two_trajectory(const SetlerParams& p,
                                         const SphericalState& s0,
                                         const TimeGrid& grid, double d0 = 1e-8,
                                         int renorm_every = 10,
                                         double transient = 0.0);

struct BifurcationData {
    std::vector<double> lambdas;
    std::vector<std::vector<double>> samples;  // wrapped alpha, `keep` per column
    std::vector<char> diverged;                // flagged columns have no samples
};

// For each lambda on the uniform grid: run the discrete map `transient`
// steps, then record `keep` wrapped-alpha values. Columns whose orbit blows
// up are flagged and left empty.
BifurcationData bifurcation_scan(const SetlerParams& base, double lambda_min,
                                 double lambda_max, int n_lambda, int transient,
                                 int keep, const SphericalState& s0);

struct JacobianReport {
    std::array<std::array<double, 3>, 3> matrix;
    std::array<std::complex<double>, 3> eigenvalues;
};

// Jacobian of the unforced field (forcing terms have no state dependence).
// No component depends on r, so the spectrum is the 2x2 angular block plus
// a structural zero; the block eigenvalues come from the quadratic formula.
JacobianReport jacobian_autonomous(const SphericalState& s, double lambda);

struct DivergenceSeries {
    std::vector<double> times;
    std::vector<double> alpha_a;
    std::vector<double> alpha_b;
    std::vector<double> separation;
    bool truncated = false;  // one of the runs blew up; common prefix kept
};

// Integrates both parameterizations from the same start and reports the
// per-sample state separation together with both alpha series.
DivergenceSeries sensitivity_pair(const SetlerParams& p_a, const SetlerParams& p_b,
                                  const SphericalState& s0, const TimeGrid& grid);

// Constants of c1 e^{kappa1 tau} + c2 e^{kappa2 tau}, kappa1 >= kappa2.
// sign is the factor taken out of the data before fitting |value|.
struct AsymptoticFit {
    double c1 = 0.0;
    double kappa1 = 0.0;
    double c2 = 0.0;
    double kappa2 = 0.0;
    double residual = 0.0;  // rms(fit - data) / rms(data) over the tail
    int sign = 1;
    bool single_term = false;
};

// Fits the tail (last tail_fraction of the series, at least 20 points) with
// a two-exponential model via Prony's recurrence on uniformly spaced data,
// falling back to a log-linear single-exponential fit when the two-term
// system is degenerate.
AsymptoticFit fit_asymptotic(std::span<const double> times,
                             std::span<const double> values, double tail_fraction);

}  // namespace setler
