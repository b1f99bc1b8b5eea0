#include "radkin/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace radkin {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo_i = static_cast<std::size_t>(i);
        const auto hi_i = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo_i] = mid - half * x;
        rule.nodes[hi_i] = mid + half * x;
        rule.weights[lo_i] = half * w;
        rule.weights[hi_i] = half * w;
    }
    return rule;
}

QuadratureRule gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        // Initial guesses from the classical asymptotic recipe.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[static_cast<std::size_t>(i - 2)]);
        }
        double pp = 0.0, p2 = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0 - z) * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = -1.0 / (pp * n * p2);
    }
    return rule;
}

double cubic_interpolate(std::span<const double> samples, double x0, double h, double x) {
    const auto n = static_cast<long>(samples.size());
    if (n == 0) return 0.0;
    if (n == 1) return samples[0];
    const double s = (x - x0) / h;
    if (s <= 0.0) return samples.front();
    if (s >= static_cast<double>(n - 1)) return samples.back();
    if (n < 4) {
        const auto i = static_cast<long>(s);
        const double w = s - static_cast<double>(i);
        return (1.0 - w) * samples[static_cast<std::size_t>(i)] + w * samples[static_cast<std::size_t>(i + 1)];
    }
    long i = static_cast<long>(std::floor(s)) - 1;
    if (i < 0) i = 0;
    if (i > n - 4) i = n - 4;
    const double t = s - static_cast<double>(i);
    const double f0 = samples[static_cast<std::size_t>(i)];
    const double f1 = samples[static_cast<std::size_t>(i + 1)];
    const double f2 = samples[static_cast<std::size_t>(i + 2)];
    const double f3 = samples[static_cast<std::size_t>(i + 3)];
    // Lagrange basis on nodes 0,1,2,3.
    return -f0 * (t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0 + f1 * t * (t - 2.0) * (t - 3.0) / 2.0 -
           f2 * t * (t - 1.0) * (t - 3.0) / 2.0 + f3 * t * (t - 1.0) * (t - 2.0) / 6.0;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

}  // namespace radkin
