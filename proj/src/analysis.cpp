#include "setler/analysis.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <future>

#include "setler/discrete.hpp"
#include "setler/parallel.hpp"

namespace setler {

namespace {

constexpr double kDerivFloor = 1e-300;

double central_difference(const std::function<double(double, double)>& f, double x,
                          double a) {
    const double h = std::cbrt(DBL_EPSILON) * std::max(1.0, std::abs(x));
    return (f(x + h, a) - f(x - h, a)) / (2.0 * h);
}

}  // namespace

LyapunovEstimate lyapunov_1d(const Map1d& map, double x0, double a, long n,
                             long transient) {
    if (!map.f) throw std::invalid_argument("lyapunov_1d: map function required");
    if (transient < 0 || n <= transient)
        throw std::invalid_argument("lyapunov_1d: need n > transient >= 0");
    LyapunovEstimate est;
    est.n = n;
    est.transient = transient;
    est.method = "algorithm1";
    double x = x0;
    // Neumaier-compensated sum; constant-derivative maps then return ln|c|
    // to within an ulp.
    double sum = 0.0, comp = 0.0;
    for (long k = 0; k < n; ++k) {
        if (!std::isfinite(x))
            throw DivergenceError("lyapunov_1d: orbit left the finite domain",
                                  static_cast<std::size_t>(k > 0 ? k - 1 : 0),
                                  static_cast<double>(k));
        if (k >= transient) {
            double d = map.df ? map.df(x, a) : central_difference(map.f, x, a);
            double ad = std::abs(d);
            if (ad == 0.0) {
                ad = kDerivFloor;
                est.warnings.push_back("derivative exactly zero at iterate " +
                                       std::to_string(k) + "; floored at 1e-300");
            }
            const double term = std::log(ad);
            const double t = sum + term;
            if (std::abs(sum) >= std::abs(term))
                comp += (sum - t) + term;
            else
                comp += (term - t) + sum;
            sum = t;
        }
        x = map.f(x, a);
    }
    est.exponent = (sum + comp) / static_cast<double>(n - transient);
    return est;
}

LyapunovEstimate lyapunov_two_trajectory(const SetlerParams& p,
                                         const SphericalState& s0,
                                         const TimeGrid& grid, double d0,
                                         int renorm_every, double transient) {
    auto field = [&p](const Vec3& y, double t) -> Vec3 {
        const Derivative d = vector_field(SphericalState{y[0], y[1], y[2]}, t, p);
        return {d.d_alpha, d.d_delta, d.d_r};
    };
    LyapunovEstimate est;
    est.method = "two-trajectory";
    est.n = static_cast<long>(grid.steps());
    est.transient = static_cast<long>(std::llround(transient / grid.h));
    est.exponent = benettin_exponent(field, Vec3{s0.alpha, s0.delta, s0.r}, grid,
                                     BenettinOptions{d0, renorm_every, transient});
    return est;
}

BifurcationData bifurcation_scan(const SetlerParams& base, double lambda_min,
                                 double lambda_max, int n_lambda, int transient,
                                 int keep, const SphericalState& s0) {
    if (n_lambda < 2) throw std::invalid_argument("bifurcation_scan: n_lambda >= 2");
    if (keep < 1) throw std::invalid_argument("bifurcation_scan: keep >= 1");
    if (transient < 0) throw std::invalid_argument("bifurcation_scan: transient >= 0");
    BifurcationData data;
    data.lambdas.resize(n_lambda);
    data.samples.resize(n_lambda);
    data.diverged.assign(n_lambda, 0);
    const double span = lambda_max - lambda_min;
    for (int i = 0; i < n_lambda; ++i)
        data.lambdas[i] =
            lambda_min + span * (static_cast<double>(i) / (n_lambda - 1));

    const auto total = static_cast<std::size_t>(transient) + keep;
    parallel_for(static_cast<std::size_t>(n_lambda), [&](std::size_t i) {
        SetlerParams p{data.lambdas[i], base.beta, base.gamma, base.delta_f,
                       base.omega};
        try {
            const Trajectory traj = iterate_map(s0, p, total);
            auto& col = data.samples[i];
            col.reserve(keep);
            for (std::size_t k = total - keep + 1; k <= total; ++k)
                col.push_back(wrap_angle(traj.states()[k].alpha));
        } catch (const DivergenceError&) {
            data.diverged[i] = 1;
        }
    });
    return data;
}

JacobianReport jacobian_autonomous(const SphericalState& s, double lambda) {
    const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
    const double sd = std::sin(s.delta), cd = std::cos(s.delta);
    JacobianReport rep;
    rep.matrix = {{{lambda * ca * cd, -lambda * sa * sd, 0.0},
                   {-lambda * sa * sd, lambda * ca * cd, 0.0},
                   {-2.0 * lambda * sd * sd * ca * sa,
                    2.0 * lambda * sd * cd * ca * ca, 0.0}}};
    const double tr = rep.matrix[0][0] + rep.matrix[1][1];
    const double det = rep.matrix[0][0] * rep.matrix[1][1] -
                       rep.matrix[0][1] * rep.matrix[1][0];
    const std::complex<double> disc(tr * tr - 4.0 * det, 0.0);
    const std::complex<double> root = std::sqrt(disc);
    std::complex<double> mu1 = (tr + root) / 2.0;
    std::complex<double> mu2 = (tr - root) / 2.0;
    if (mu2.real() > mu1.real()) std::swap(mu1, mu2);
    rep.eigenvalues = {mu1, mu2, std::complex<double>(0.0, 0.0)};
    return rep;
}

DivergenceSeries sensitivity_pair(const SetlerParams& p_a, const SetlerParams& p_b,
                                  const SphericalState& s0, const TimeGrid& grid) {
    auto run = [&](const SetlerParams& p) {
        return std::async(std::launch::async, [&grid, &s0, p] {
            try {
                return std::make_pair(integrate(s0, grid, p), false);
            } catch (const DivergenceError& e) {
                if (!e.partial()) throw;
                return std::make_pair(*e.partial(), true);
            }
        });
    };
    auto fut_a = run(p_a);
    auto fut_b = run(p_b);
    const auto [traj_a, trunc_a] = fut_a.get();
    const auto [traj_b, trunc_b] = fut_b.get();

    DivergenceSeries out;
    out.truncated = trunc_a || trunc_b;
    const std::size_t n = std::min(traj_a.size(), traj_b.size());
    out.times.reserve(n);
    out.alpha_a.reserve(n);
    out.alpha_b.reserve(n);
    out.separation.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SphericalState& a = traj_a.states()[i];
        const SphericalState& b = traj_b.states()[i];
        out.times.push_back(traj_a.times()[i]);
        out.alpha_a.push_back(a.alpha);
        out.alpha_b.push_back(b.alpha);
        const double da = a.alpha - b.alpha;
        const double dd = a.delta - b.delta;
        const double dr = a.r - b.r;
        out.separation.push_back(std::sqrt(da * da + dd * dd + dr * dr));
    }
    return out;
}

namespace {

struct TailView {
    std::vector<double> t;
    std::vector<double> y;  // sign-normalized, all positive
    int sign;
};

TailView make_tail(std::span<const double> times, std::span<const double> values,
                   double tail_fraction) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_asymptotic: length mismatch");
    const std::size_t n = times.size();
    auto count = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, std::min<std::size_t>(20, n), n);
    if (count < 20)
        throw std::invalid_argument("fit_asymptotic: need at least 20 tail points");
    const std::size_t first = n - count;
    double mean = 0.0;
    for (std::size_t i = first; i < n; ++i) mean += values[i];
    const int sign = mean >= 0.0 ? 1 : -1;
    TailView tail;
    tail.sign = sign;
    tail.t.reserve(count);
    tail.y.reserve(count);
    for (std::size_t i = first; i < n; ++i) {
        const double y = sign * values[i];
        if (!(y > 0.0))
            throw std::domain_error(
                "fit_asymptotic: non-positive tail value after sign normalization");
        tail.t.push_back(times[i]);
        tail.y.push_back(y);
    }
    return tail;
}

double relative_rms(const std::vector<double>& y, const std::vector<double>& fit) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += (fit[i] - y[i]) * (fit[i] - y[i]);
        den += y[i] * y[i];
    }
    return std::sqrt(num / den);
}

bool solve2x2(double a11, double a12, double a22, double b1, double b2, double& x1,
              double& x2) {
    const double det = a11 * a22 - a12 * a12;
    const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a22)});
    if (scale == 0.0 || std::abs(det) < 1e-12 * scale * scale) return false;
    x1 = (b1 * a22 - b2 * a12) / det;
    x2 = (a11 * b2 - a12 * b1) / det;
    return true;
}

}  // namespace

AsymptoticFit fit_asymptotic(std::span<const double> times,
                             std::span<const double> values, double tail_fraction) {
    const TailView tail = make_tail(times, values, tail_fraction);
    const std::size_t m = tail.t.size();

    // single-exponential baseline: log-linear least squares
    AsymptoticFit single;
    single.sign = tail.sign;
    single.single_term = true;
    {
        double mt = 0.0, ml = 0.0;
        std::vector<double> lny(m);
        for (std::size_t i = 0; i < m; ++i) {
            lny[i] = std::log(tail.y[i]);
            mt += tail.t[i];
            ml += lny[i];
        }
        mt /= static_cast<double>(m);
        ml /= static_cast<double>(m);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            num += (tail.t[i] - mt) * (lny[i] - ml);
            den += (tail.t[i] - mt) * (tail.t[i] - mt);
        }
        single.kappa1 = num / den;
        single.c1 = std::exp(ml - single.kappa1 * mt);
        std::vector<double> fit(m);
        for (std::size_t i = 0; i < m; ++i)
            fit[i] = single.c1 * std::exp(single.kappa1 * tail.t[i]);
        single.residual = relative_rms(tail.y, fit);
    }

    // uniform spacing gate for the Prony recurrence
    const double dt = (tail.t.back() - tail.t.front()) / static_cast<double>(m - 1);
    bool uniform = m >= 6;
    for (std::size_t i = 1; i < m && uniform; ++i)
        if (std::abs(tail.t[i] - tail.t[i - 1] - dt) > 1e-9 * std::abs(dt))
            uniform = false;

    AsymptoticFit two;
    bool two_ok = false;
    if (uniform) {
        // least squares for y_{k+2} = a y_{k+1} + b y_k
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (std::size_t k = 0; k + 2 < m; ++k) {
            const double u = tail.y[k + 1], v = tail.y[k], w = tail.y[k + 2];
            s11 += u * u;
            s12 += u * v;
            s22 += v * v;
            r1 += u * w;
            r2 += v * w;
        }
        double a = 0, b = 0;
        if (solve2x2(s11, s12, s22, r1, r2, a, b)) {
            const double disc = a * a + 4.0 * b;
            if (disc > 0.0) {
                const double sq = std::sqrt(disc);
                const double z1 = 0.5 * (a + sq), z2 = 0.5 * (a - sq);
                if (z1 > 0.0 && z2 > 0.0 &&
                    std::abs(z1 - z2) > 1e-9 * std::max(z1, z2)) {
                    const double k1 = std::log(z1) / dt, k2 = std::log(z2) / dt;
                    // amplitudes around the tail midpoint to keep the basis tame
                    const double tref = 0.5 * (tail.t.front() + tail.t.back());
                    double b11 = 0, b12 = 0, b22 = 0, c1r = 0, c2r = 0;
                    for (std::size_t i = 0; i < m; ++i) {
                        const double e1 = std::exp(k1 * (tail.t[i] - tref));
                        const double e2 = std::exp(k2 * (tail.t[i] - tref));
                        b11 += e1 * e1;
                        b12 += e1 * e2;
                        b22 += e2 * e2;
                        c1r += e1 * tail.y[i];
                        c2r += e2 * tail.y[i];
                    }
                    double c1 = 0, c2 = 0;
                    if (solve2x2(b11, b12, b22, c1r, c2r, c1, c2)) {
                        c1 *= std::exp(-k1 * tref);
                        c2 *= std::exp(-k2 * tref);
                        if (std::isfinite(c1) && std::isfinite(c2)) {
                            two.sign = tail.sign;
                            two.c1 = c1;
                            two.kappa1 = k1;
                            two.c2 = c2;
                            two.kappa2 = k2;
                            if (two.kappa2 > two.kappa1) {
                                std::swap(two.kappa1, two.kappa2);
                                std::swap(two.c1, two.c2);
                            }
                            std::vector<double> fit(m);
                            for (std::size_t i = 0; i < m; ++i)
                                fit[i] = two.c1 * std::exp(two.kappa1 * tail.t[i]) +
                                         two.c2 * std::exp(two.kappa2 * tail.t[i]);
                            two.residual = relative_rms(tail.y, fit);
                            two_ok = std::isfinite(two.residual);
                        }
                    }
                }
            }
        }
    }

    if (two_ok && two.residual <= single.residual) return two;
    return single;
}

}  // namespace setler
