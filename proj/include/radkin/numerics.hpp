#pragma once

#include <span>
#include <vector>

namespace radkin {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// n-point Gauss-Laguerre rule for ∫₀^∞ f(α) e^{-α} dα.
QuadratureRule gauss_laguerre(int n);

/// Four-point Lagrange interpolation of samples on the uniform grid
/// x_i = x0 + i·h. Clamps to the end values outside [x0, x0 + (n-1)h].
double cubic_interpolate(std::span<const double> samples, double x0, double h, double x);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace radkin
