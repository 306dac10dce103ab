#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace setler {

// Composite Simpson with n subintervals (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Simpson to absolute tolerance tol. Throws std::runtime_error
// naming the achieved tolerance when max_depth is exhausted anywhere.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

// Nodes and weights for Gauss-Hermite quadrature: sum w_i g(x_i) integrates
// e^{-x^2} g(x) over the real line exactly for polynomial g up to degree
// 2n-1. Computed by Newton iteration on the Hermite recurrence.
std::vector<std::pair<double, double>> gauss_hermite(int n);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace setler
