#include "setler/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "setler/parallel.hpp"
#include "setler/quadrature.hpp"
#include "setler/rng.hpp"

namespace setler {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExpOverflow = 709.0;   // exp() overflows above this
constexpr double kExpUnderflow = 745.0;  // exp(-x) is zero beyond this

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Deterministic batched Monte Carlo: per-batch streams derived from the
// seed, partial sums combined in batch order.
template <class SampleFn>
McEstimate monte_carlo(std::size_t samples, std::uint64_t seed, SampleFn&& weight) {
    constexpr std::size_t kBatch = 65536;
    const std::size_t n_batches = (samples + kBatch - 1) / kBatch;
    std::vector<double> sums(n_batches, 0.0), sqs(n_batches, 0.0);
    parallel_for(n_batches, [&](std::size_t b) {
        SplitMix64 rng = batch_stream(seed, b);
        const std::size_t lo = b * kBatch;
        const std::size_t hi = std::min(samples, lo + kBatch);
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double w = weight(rng);
            s += w;
            s2 += w * w;
        }
        sums[b] = s;
        sqs[b] = s2;
    });
    double total = 0.0, total2 = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
        total += sums[b];
        total2 += sqs[b];
    }
    const double n = static_cast<double>(samples);
    McEstimate est;
    est.mean = total / n;
    const double var = std::max(0.0, total2 / n - est.mean * est.mean);
    est.stderr_ = std::sqrt(var / n);
    return est;
}

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

GaussianProfile::GaussianProfile(double sigma_, Vec3 center_)
    : sigma(sigma_), center(center_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("GaussianProfile: sigma must be positive");
}

void EntropySpec::validate() const {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("EntropySpec: r_max must be positive");
    if (quadrature.mc_samples < 10000)
        throw std::invalid_argument("EntropySpec: mc_samples must be >= 1e4");
    if (quadrature.grid_n < 2)
        throw std::invalid_argument("EntropySpec: grid_n must be >= 2");
    if (!std::isfinite(scalar_curvature))
        throw std::invalid_argument("EntropySpec: scalar_curvature must be finite");
}

ClosedFormParams::ClosedFormParams(double lambda_, double beta_, double gamma_,
                                   double omega_, double alpha0_, double delta0_,
                                   double C1_, double C2_, double C3_)
    : lambda(lambda_), beta(beta_), gamma(gamma_), omega(omega_), alpha0(alpha0_),
      delta0(delta0_), C1(C1_), C2(C2_), C3(C3_) {
    for (double v : {lambda, beta, gamma, omega, alpha0, delta0, C1, C2, C3})
        if (!std::isfinite(v))
            throw std::invalid_argument("ClosedFormParams: all fields must be finite");
    if (omega == 0.0)
        throw std::invalid_argument(
            "ClosedFormParams: omega must be nonzero (appears as beta/omega)");
}

namespace {

double alpha_exponent(double tau, const ClosedFormParams& p) {
    return p.lambda * std::cos(p.delta0) * tau -
           (p.beta / p.omega) * std::cos(p.omega * tau) + p.C1;
}

double delta_exponent(double tau, const ClosedFormParams& p) {
    return p.lambda * std::cos(p.alpha0) * tau +
           (p.gamma / p.omega) * std::sin(p.omega * tau) + p.C2;
}

double two_atan_exp(double e, bool* saturated) {
    if (saturated) *saturated = e > kExpOverflow;
    return 2.0 * std::atan(std::exp(e));
}

}  // namespace

double closed_form_alpha(double tau, const ClosedFormParams& p, bool* saturated) {
    return two_atan_exp(alpha_exponent(tau, p), saturated);
}

double closed_form_delta(double tau, const ClosedFormParams& p, bool* saturated) {
    return two_atan_exp(delta_exponent(tau, p), saturated);
}

double closed_form_r(double tau, const ClosedFormParams& p) {
    if (tau == 0.0) return p.C3;
    auto integrand = [&p](double u) {
        const double a = closed_form_alpha(u, p);
        const double d = closed_form_delta(u, p);
        const double sdca = std::sin(d) * std::cos(a);
        return p.lambda * sdca * sdca + d * std::sin(p.omega * u);
    };
    const double lo = std::min(0.0, tau), hi = std::max(0.0, tau);
    const double v = adaptive_simpson(integrand, lo, hi, 1e-11);
    return p.C3 + (tau > 0.0 ? v : -v);
}

namespace {

ResidualReport residual_against(const ClosedFormParams& p, const TimeGrid& grid,
                                bool full_ode) {
    ResidualReport rep;
    const std::size_t n = grid.steps();
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = grid.time_at(k);
        const double e = alpha_exponent(tau, p);
        if (e > kExpOverflow || e < -kExpUnderflow) {
            ++rep.skipped;  // alpha pinned at pi or 0; sin(alpha) lost
            continue;
        }
        const double eprime = p.lambda * std::cos(p.delta0) +
                              p.beta * std::sin(p.omega * tau);
        const double dadt = eprime / std::cosh(e);  // analytic derivative
        const double alpha = 2.0 * std::atan(std::exp(e));
        const double rhs =
            full_ode ? p.lambda * std::sin(alpha) * std::cos(p.delta0) +
                           p.beta * std::sin(p.omega * tau)
                     : std::sin(alpha) * (p.lambda * std::cos(p.delta0) +
                                          p.beta * std::sin(p.omega * tau));
        rep.max_residual = std::max(rep.max_residual, std::abs(dadt - rhs));
    }
    return rep;
}

}  // namespace

ResidualReport closed_form_residual(const ClosedFormParams& p, const TimeGrid& grid) {
    return residual_against(p, grid, false);
}

ResidualReport closed_form_residual_full(const ClosedFormParams& p,
                                         const TimeGrid& grid) {
    return residual_against(p, grid, true);
}

namespace {

// Gaussian density of the profile as a function of the radius from its center.
struct GaussianF {
    double amp;     // (2 pi sigma^2)^{-3/2}
    double sigma2;  // sigma^2

    explicit GaussianF(const GaussianProfile& p)
        : amp(std::pow(2.0 * kPi * p.sigma * p.sigma, -1.5)),
          sigma2(p.sigma * p.sigma) {}

    double operator()(double r) const {
        return amp * std::exp(-r * r / (2.0 * sigma2));
    }
};

}  // namespace

FunctionalResult f_functional_gaussian(const GaussianProfile& profile,
                                       const EntropySpec& spec) {
    spec.validate();
    FunctionalResult out;
    out.case_name = spec.drop_exp_f ? "gaussian-dropped-expf" : "gaussian";
    out.paper_value = 1.0 / (2.0 * kPi * kPi * profile.sigma);

    const GaussianF f(profile);
    const double sigma = profile.sigma;
    const bool keep = !spec.drop_exp_f;
    auto integrand = [&](double r) {
        const double fv = f(r);
        const double grad2 = (r * r / (f.sigma2 * f.sigma2)) * fv * fv;
        double v = 4.0 * kPi * r * r * grad2;
        if (keep) v *= std::exp(-fv);
        return v;
    };
    const double cutoff = 16.0 * sigma;
    const double rough = simpson(integrand, 0.0, cutoff, 512);
    out.quadrature_value = adaptive_simpson(integrand, 0.0, cutoff,
                                            std::max(1e-15, 1e-12 * std::abs(rough)));

    const double prop_sd = sigma / std::sqrt(2.0);
    const double prop_norm = std::pow(kPi * sigma * sigma, -1.5);
    const auto mc = monte_carlo(
        spec.quadrature.mc_samples, spec.quadrature.mc_seed, [&](SplitMix64& rng) {
            const double x = prop_sd * rng.normal();
            const double y = prop_sd * rng.normal();
            const double z = prop_sd * rng.normal();
            const double r2 = x * x + y * y + z * z;
            const double fv = f.amp * std::exp(-r2 / (2.0 * f.sigma2));
            const double grad2 = (r2 / (f.sigma2 * f.sigma2)) * fv * fv;
            const double pdf = prop_norm * std::exp(-r2 / f.sigma2);
            double w = grad2 / pdf;
            if (keep) w *= std::exp(-fv);
            return w;
        });
    out.mc_value = mc.mean;
    out.mc_stderr = mc.stderr_;
    out.discrepancy_flag = relative_gap(out.paper_value, out.quadrature_value) > 1e-2;
    return out;
}

FunctionalResult f_functional_quadratic(const EntropySpec& spec) {
    spec.validate();
    FunctionalResult out;
    out.case_name = "quadratic";
    out.paper_value = std::pow(kPi, 1.5) / 2.0;

    auto integrand = [](double r) {
        return 16.0 * kPi * r * r * r * r * std::exp(-r * r);
    };
    out.quadrature_value = simpson(integrand, 0.0, 10.0, spec.quadrature.grid_n);

    const double prop_sd = 1.0 / std::sqrt(2.0);
    const double w_scale = 4.0 * std::pow(kPi, 1.5);
    const auto mc = monte_carlo(spec.quadrature.mc_samples, spec.quadrature.mc_seed,
                                [&](SplitMix64& rng) {
                                    const double x = prop_sd * rng.normal();
                                    const double y = prop_sd * rng.normal();
                                    const double z = prop_sd * rng.normal();
                                    return w_scale * (x * x + y * y + z * z);
                                });
    out.mc_value = mc.mean;
    out.mc_stderr = mc.stderr_;
    out.discrepancy_flag = relative_gap(out.paper_value, out.quadrature_value) > 1e-2;
    return out;
}

double f_quadratic_grid3d(int nodes_per_axis) {
    const auto gh = gauss_hermite(nodes_per_axis);
    double total = 0.0;
    for (const auto& [xi, wi] : gh)
        for (const auto& [xj, wj] : gh)
            for (const auto& [xk, wk] : gh)
                total += wi * wj * wk * 4.0 * (xi * xi + xj * xj + xk * xk);
    return total;
}

FunctionalResult f_functional_perturbed(const GaussianProfile& profile,
                                        const EntropySpec& spec) {
    spec.validate();
    FunctionalResult out = f_functional_gaussian(profile, spec);
    out.case_name = "perturbed";
    const double curvature = spec.scalar_curvature;
    if (curvature == 0.0) return out;

    const GaussianF f(profile);
    auto ball_integrand = [&](double r) {
        return 4.0 * kPi * r * r * std::exp(-f(r));
    };
    const double rough = simpson(ball_integrand, 0.0, spec.r_max, 512);
    const double ball = adaptive_simpson(ball_integrand, 0.0, spec.r_max,
                                         std::max(1e-13, 1e-12 * std::abs(rough)));
    const double ball_volume = 4.0 / 3.0 * kPi * std::pow(spec.r_max, 3);
    const auto mc = monte_carlo(
        spec.quadrature.mc_samples, spec.quadrature.mc_seed ^ 0x9D2C5680ULL,
        [&](SplitMix64& rng) {
            // integrand depends only on the radius; sample it from the
            // uniform-ball radial cdf
            const double r = spec.r_max * std::cbrt(rng.uniform01());
            return ball_volume * std::exp(-f(r));
        });

    const double correction = curvature * ball;
    out.paper_value += correction;
    out.quadrature_value += correction;
    out.mc_value += curvature * mc.mean;
    out.mc_stderr = std::sqrt(out.mc_stderr * out.mc_stderr +
                              curvature * curvature * mc.stderr_ * mc.stderr_);
    if (std::abs(correction) >
        1e6 * std::abs(out.quadrature_value - correction))
        out.warnings.push_back(
            "curvature term dominates the functional by more than 1e6x; "
            "perturbation is no longer small");
    out.discrepancy_flag = relative_gap(out.paper_value, out.quadrature_value) > 1e-2;
    return out;
}

double fit_value(const AsymptoticFit& fit, double tau) {
    return fit.c1 * std::exp(fit.kappa1 * tau) + fit.c2 * std::exp(fit.kappa2 * tau);
}

double fit_derivative(const AsymptoticFit& fit, double tau) {
    return fit.c1 * fit.kappa1 * std::exp(fit.kappa1 * tau) +
           fit.c2 * fit.kappa2 * std::exp(fit.kappa2 * tau);
}

double w_closed_form(const AsymptoticFit& fit, double tau, const EntropySpec& spec,
                     bool* underflow) {
    spec.validate();
    if (underflow) *underflow = false;
    const double f = fit_value(fit, tau);
    if (!std::isfinite(f) || f > kExpUnderflow) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    if (-f > kExpOverflow)
        throw std::domain_error("w_functional: e^{-f} overflows (f very negative)");
    const double g = fit_derivative(fit, tau);
    const double factor =
        tau * (spec.scalar_curvature + g * g) + f - 3.0;
    const double ef = std::exp(-f);
    const double shell = std::pow(spec.r_max, 3) / 3.0;
    const double w = shell * factor * ef;
    if (!std::isfinite(w))
        throw std::domain_error("w_functional: non-finite integrand factor");
    if (underflow && w == 0.0 && factor != 0.0) *underflow = true;
    return w;
}

double w_radial_quadrature(const AsymptoticFit& fit, double tau,
                           const EntropySpec& spec) {
    spec.validate();
    const double f = fit_value(fit, tau);
    if (!std::isfinite(f) || f > kExpUnderflow) return 0.0;
    const double g = fit_derivative(fit, tau);
    const double factor = tau * (spec.scalar_curvature + g * g) + f - 3.0;
    const double ef = std::exp(-f);
    auto integrand = [&](double r) { return r * r * factor * ef; };
    return simpson(integrand, 0.0, spec.r_max, spec.quadrature.grid_n);
}

WValue w_functional(const AsymptoticFit& fit, double tau, const EntropySpec& spec) {
    WValue out;
    out.value = w_closed_form(fit, tau, spec, &out.underflow);
    const double quad = w_radial_quadrature(fit, tau, spec);
    const double tol = 1e-10 * std::max(1.0, std::abs(out.value));
    if (std::abs(out.value - quad) > tol)
        throw std::logic_error("w_functional: closed form and radial quadrature "
                               "disagree beyond 1e-10");
    return out;
}

WSeries w_series(const AsymptoticFit& fit, const TimeGrid& grid,
                 const EntropySpec& spec) {
    WSeries out;
    const std::size_t n = grid.steps();
    out.tau.reserve(n + 1);
    out.w.reserve(n + 1);
    out.f.reserve(n + 1);
    out.dfdtau.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = grid.time_at(k);
        out.tau.push_back(tau);
        out.w.push_back(w_closed_form(fit, tau, spec));
        out.f.push_back(fit_value(fit, tau));
        out.dfdtau.push_back(fit_derivative(fit, tau));
    }
    return out;
}

double entropy_growth_rate(std::span<const double> tau, std::span<const double> w,
                           double tau_min, double tau_max) {
    if (tau.size() != w.size())
        throw std::invalid_argument("entropy_growth_rate: length mismatch");
    std::vector<double> xs, ys;
    int sign = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] < tau_min || tau[i] > tau_max) continue;
        if (w[i] == 0.0 || !std::isfinite(w[i]))
            throw std::domain_error("entropy_growth_rate: W vanishes in window");
        const int s = w[i] > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign)
            throw std::domain_error("entropy_growth_rate: W changes sign in window");
        xs.push_back(tau[i]);
        ys.push_back(std::log(std::abs(w[i])));
    }
    if (xs.size() < 2)
        throw std::invalid_argument("entropy_growth_rate: window has < 2 samples");
    return regression_slope(xs, ys);
}

std::pair<double, double> pre_suppression_window(std::span<const double> tau,
                                                 std::span<const double> f) {
    if (tau.size() != f.size() || tau.empty())
        throw std::invalid_argument("pre_suppression_window: bad series");
    std::size_t best_lo = 0, best_len = 0, lo = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= tau.size(); ++i) {
        const bool ok = i < tau.size() && f[i] < 1.0;
        if (ok && !in_run) {
            lo = i;
            in_run = true;
        } else if (!ok && in_run) {
            if (i - lo > best_len) {
                best_len = i - lo;
                best_lo = lo;
            }
            in_run = false;
        }
    }
    if (best_len == 0)
        throw std::domain_error("pre_suppression_window: f never below 1");
    return {tau[best_lo], tau[best_lo + best_len - 1]};
}

}  // namespace setler
