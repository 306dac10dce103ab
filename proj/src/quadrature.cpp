#include "setler/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace setler {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

namespace {

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth,
             double& worst) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && std::abs(err) > worst) worst = std::abs(err);
        return left + right + err / 15.0;
    }
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double worst = 0.0;
    const double v = adapt(f, a, b, fa, fm, fb, whole, tol, max_depth, worst);
    if (worst > 15.0 * tol)
        throw std::runtime_error("adaptive_simpson: did not converge; achieved " +
                                 std::to_string(worst / 15.0) + " vs requested " +
                                 std::to_string(tol));
    return v;
}

std::vector<std::pair<double, double>> gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
    std::vector<std::pair<double, double>> out(n);
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    std::vector<double> roots;  // found so far, descending
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // initial guesses walk down from the largest root
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) -
                1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * roots[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * roots[1];
        else
            z = 2.0 * z - roots[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // recurrence for orthonormal Hermite functions
            double p1 = pi_quarter, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        roots.push_back(z);
        out[i] = {z, 2.0 / (pp * pp)};
        out[n - 1 - i] = {-z, 2.0 / (pp * pp)};
    }
    if (n % 2) out[n / 2].first = 0.0;
    return out;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: need two same-length series");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("regression_slope: degenerate x");
    return num / den;
}

}  // namespace setler
