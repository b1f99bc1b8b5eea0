#include "radkin/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "radkin/errors.hpp"
#include "radkin/numerics.hpp"

namespace radkin {

std::string to_string(RootClass c) {
    switch (c) {
        case RootClass::physical: return "physical";
        case RootClass::runaway: return "runaway";
        case RootClass::ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void normalize(Background& bg) {
    double mass = 0.0;
    for (const auto& n : bg.nodes) mass += n.weight * n.gamma;
    if (!(mass > 0.0)) throw std::invalid_argument("background has no mass on its quadrature nodes");
    const double scale = bg.n0 / mass;
    for (auto& n : bg.nodes) n.weight *= scale;
}

}  // namespace

Background Background::cold(double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("n0 must be positive");
    return {n0, {{0.0, 0.0, 1.0, n0}}};
}

Background Background::maxwellian(double n0, double v_th, int nodes, double cutoff) {
    if (!(n0 > 0.0) || !(v_th > 0.0)) throw std::invalid_argument("n0 and v_th must be positive");
    const double vmax = cutoff * v_th;
    const QuadratureRule perp = gauss_legendre(nodes, 0.0, vmax);
    const QuadratureRule par = gauss_legendre(nodes, -vmax, vmax);
    Background bg;
    bg.n0 = n0;
    bg.nodes.reserve(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            const double vp = perp.nodes[static_cast<std::size_t>(i)];
            const double v3 = par.nodes[static_cast<std::size_t>(j)];
            const double r2 = vp * vp + v3 * v3;
            const double gamma = std::sqrt(1.0 + r2);
            const double w = 2.0 * std::numbers::pi * vp * perp.weights[static_cast<std::size_t>(i)] *
                             par.weights[static_cast<std::size_t>(j)] * std::exp(-0.5 * r2 / (v_th * v_th));
            bg.nodes.push_back({vp * vp, v3, gamma, w / gamma});
        }
    normalize(bg);
    return bg;
}

Background Background::cold_transverse(const std::function<double(double)>& h, double n0, double lo, double hi,
                                       int nodes) {
    if (!(n0 > 0.0) || !(hi > lo)) throw std::invalid_argument("invalid cold-transverse background");
    const QuadratureRule rule = gauss_legendre(nodes, lo, hi);
    Background bg;
    bg.n0 = n0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v3 = rule.nodes[i];
        const double gamma = std::sqrt(1.0 + v3 * v3);
        bg.nodes.push_back({0.0, v3, gamma, rule.weights[i] * h(v3) / gamma});
    }
    normalize(bg);
    return bg;
}

Background Background::tabulated(const std::function<double(double, double, double)>& g, double n0,
                                 double half_width, int nodes) {
    if (!(n0 > 0.0) || !(half_width > 0.0)) throw std::invalid_argument("invalid tabulated background");
    const QuadratureRule rule = gauss_legendre(nodes, -half_width, half_width);
    Background bg;
    bg.n0 = n0;
    for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b)
            for (int c = 0; c < nodes; ++c) {
                const double v1 = rule.nodes[static_cast<std::size_t>(a)];
                const double v2 = rule.nodes[static_cast<std::size_t>(b)];
                const double v3 = rule.nodes[static_cast<std::size_t>(c)];
                const double value = g(v1, v2, v3);
                if (value == 0.0) continue;
                const double gamma = std::sqrt(1.0 + v1 * v1 + v2 * v2 + v3 * v3);
                const double w = rule.weights[static_cast<std::size_t>(a)] * rule.weights[static_cast<std::size_t>(b)] *
                                 rule.weights[static_cast<std::size_t>(c)];
                bg.nodes.push_back({v1 * v1 + v2 * v2, v3, gamma, w * value / gamma});
            }
    normalize(bg);
    return bg;
}

double cold_cubic_residual(Complex omega, double omega_p, double tau) {
    const Complex i(0.0, 1.0);
    const Complex p = i * tau * omega * omega * omega + omega * omega - omega_p * omega_p;
    const double m = std::abs(omega);
    return std::abs(p) / std::max({omega_p * omega_p, m * m, tau * m * m * m});
}

std::vector<DispersionRoot> cold_dispersion_roots(double omega_p, double tau) {
    if (!(omega_p > 0.0) || !(tau >= 0.0)) throw std::invalid_argument("need omega_p > 0 and tau >= 0");
    std::vector<Complex> found;
    if (tau == 0.0) {
        found = {Complex(-omega_p, 0.0), Complex(omega_p, 0.0)};
    } else {
        using L = std::complex<long double>;
        const L i(0.0L, 1.0L);
        const long double t = tau;
        const long double wp2 = static_cast<long double>(omega_p) * omega_p;
        // monic form ω³ + aω² + c = 0
        const L a = -i / t;
        const L c = i * wp2 / t;
        const L p = -a * a / 3.0L;
        const L q = 2.0L * a * a * a / 27.0L + c;
        const L disc = std::sqrt(q * q / 4.0L + p * p * p / 27.0L);
        L u3 = -q / 2.0L + disc;
        if (std::abs(-q / 2.0L - disc) > std::abs(u3)) u3 = -q / 2.0L - disc;
        const L u = std::pow(u3, 1.0L / 3.0L);
        const L rot(-0.5L, std::sqrt(3.0L) / 2.0L);
        L uk = u;
        for (int k = 0; k < 3; ++k) {
            L w = (std::abs(uk) > 0.0L ? uk - p / (3.0L * uk) : uk) - a / 3.0L;
            for (int it = 0; it < 50; ++it) {
                const L f = i * t * w * w * w + w * w - wp2;
                const L df = 3.0L * i * t * w * w + 2.0L * w;
                const L dw = f / df;
                w -= dw;
                if (std::abs(dw) <= 1e-19L * std::abs(w)) break;
            }
            found.emplace_back(static_cast<double>(w.real()), static_cast<double>(w.imag()));
            uk *= rot;
        }
    }
    std::sort(found.begin(), found.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });

    // the cubic divided by ω², well scaled at every root
    auto relation = [omega_p](Complex w, double t) {
        return 1.0 + Complex(0.0, t) * w - omega_p * omega_p / (w * w);
    };
    std::vector<DispersionRoot> roots;
    for (Complex w : found) {
        DispersionRoot r;
        r.omega = w;
        r.tau = tau;
        r.residual = cold_cubic_residual(w, omega_p, tau);
        classify_by_continuation(relation, r, DispersionOptions{});
        roots.push_back(std::move(r));
    }
    return roots;
}

DispersionValue warm_dispersion_function(Complex omega, double k, const Background& bg, double tau,
                                         double q_over_m, double mass, double eps_res) {
    const double coupling = q_over_m * q_over_m * mass;
    Complex sum = 0.0;
    double min_res = std::numeric_limits<double>::infinity();
    for (const auto& n : bg.nodes) {
        const Complex W = omega * n.gamma - k * n.v3;
        min_res = std::min(min_res, std::abs(W));
        const Complex delta = 1.0 + Complex(0.0, tau) * W;
        sum += n.weight * (1.0 + n.perp2) / (delta * W * W);
    }
    DispersionValue out;
    out.value = 1.0 - coupling * sum;
    out.min_resonance = min_res;
    out.near_singular = min_res < eps_res;
    return out;
}

std::vector<Complex> default_seeds(double omega_p, double tau) {
    std::vector<Complex> s = {Complex(-omega_p, -0.5 * omega_p * omega_p * tau),
                              Complex(omega_p, -0.5 * omega_p * omega_p * tau)};
    if (tau > 0.0) s.emplace_back(0.0, 1.0 / tau);
    return s;
}

Complex newton_root(const std::function<Complex(Complex)>& f, Complex seed, const DispersionOptions& opt) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double kStall = 256.0;
    auto fail = [](const std::string& why, Complex w, double res) {
        std::ostringstream msg;
        msg.precision(17);
        msg << why << " (last iterate " << w.real() << (w.imag() < 0 ? " - " : " + ") << std::abs(w.imag())
            << "i, |D| = " << res << ")";
        throw ConvergenceFailure(msg.str(), res);
    };
    Complex w = seed;
    Complex d = f(w);
    if (!finite(d)) {
        // A seed exactly on a pole of D (i/τ for a cold background) is moved
        // off it by a relative 1e-7.
        w = seed + 1e-7 * std::abs(seed) * Complex(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
        d = f(w);
    }
    if (!finite(d)) fail("dispersion function is not finite at the seed", w, std::abs(d));
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (std::abs(d) < opt.tolerance) return w;
        // The difference step shrinks with the Newton step, so the stencil
        // stays clear of a nearby pole (the runaway root lies a relative τ²
        // from i/τ).
        const double scale = std::abs(w) > 0.0 ? std::abs(w) : 1.0;
        double h = 1e-8 * scale;
        Complex slope = (f(w + h) - f(w - h)) / (2.0 * h);
        for (int refine = 0; refine < 8 && finite(slope) && slope != 0.0; ++refine) {
            const double target = std::max(1e-3 * std::abs(d / slope), 64.0 * eps * scale);
            if (h <= 4.0 * target) break;
            h = target;
            slope = (f(w + h) - f(w - h)) / (2.0 * h);
        }
        if (!finite(slope) || slope == 0.0) fail("derivative vanished or is not finite", w, std::abs(d));
        const Complex full = d / slope;
        double lambda = 1.0;
        bool accepted = false;
        Complex wn;
        Complex dn;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            wn = w - lambda * full;
            dn = f(wn);
            if (finite(dn) && std::abs(dn) < std::abs(d)) {
                accepted = true;
                break;
            }
        }
        // A Newton step at the rounding level of ω means D cannot be
        // evaluated more precisely than this. Near the runaway root the
        // factor 1 + iτω cancels to about τ², so D carries noise of order
        // ε/τ² while ω itself is still fixed to a few ε relative.
        if (!accepted) {
            if (std::abs(full) <= kStall * eps * std::abs(w)) return w;
            fail("Newton step could not reduce |D|", w, std::abs(d));
        }
        if (std::abs(lambda * full) <= kStall * eps * std::abs(wn)) return wn;
        w = wn;
        d = dn;
    }
    if (std::abs(d) < opt.tolerance) return w;
    fail("Newton iteration did not converge in " + std::to_string(opt.max_iterations) + " iterations", w,
         std::abs(d));
    return w;
}

double continuation_slope(const DispersionRoot& root) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [t, w] : root.continuation_path) {
        if (t <= 0.0) continue;
        x.push_back(std::log(t));
        y.push_back(std::log(std::abs(w)));
    }
    if (x.size() < 2) return 0.0;
    return fit_line(x, y).slope;
}

RootClass classify_by_continuation(const std::function<Complex(Complex, double)>& f, DispersionRoot& root,
                                   const DispersionOptions& opt) {
    root.continuation_path = {{root.tau, root.omega}};
    if (!(root.tau > 0.0)) return root.classification = RootClass::physical;

    const double ratio = std::pow(0.5, 1.0 / opt.substeps);
    double t = root.tau;
    Complex w = root.omega;
    double t_prev = 0.0;
    Complex w_prev = 0.0;
    bool have_prev = false;
    try {
        // The runaway root sits a relative τ² from a pole of D, so the secant
        // predictor is seeded by a step small enough not to cross it.
        {
            const double t_boot = t * (1.0 - 1e-9);
            const Complex w_boot = newton_root([&](Complex z) { return f(z, t_boot); }, w, opt);
            t_prev = t_boot;
            w_prev = w_boot;
            have_prev = true;
        }
        for (int h = 0; h < opt.halvings; ++h) {
            if (h > 0 && 0.5 * t < opt.tau_floor) break;
            for (int s = 0; s < opt.substeps; ++s) {
                const double t_new = t * ratio;
                Complex guess = w;
                if (have_prev) {
                    // secant predictor in (log τ, log ω)
                    const double frac = std::log(t_new / t) / std::log(t / t_prev);
                    guess = w * std::exp(std::log(w / w_prev) * frac);
                }
                const Complex w_new = newton_root([&](Complex z) { return f(z, t_new); }, guess, opt);
                t_prev = t;
                w_prev = w;
                have_prev = true;
                t = t_new;
                w = w_new;
            }
            root.continuation_path.emplace_back(t, w);
        }
    } catch (const ConvergenceFailure&) {
        return root.classification = RootClass::ambiguous;
    }

    const auto& path = root.continuation_path;
    double max_mag = 0.0;
    for (const auto& p : path) max_mag = std::max(max_mag, std::abs(p.second));
    const Complex last = path.back().second;
    const Complex before = path[path.size() - 2].second;
    const bool bounded = max_mag <= 10.0 * std::abs(root.omega);
    const bool settled = std::abs(last - before) <= 1e-3 * std::abs(last);
    if (bounded && settled) return root.classification = RootClass::physical;
    if (std::abs(continuation_slope(root) + 1.0) <= 0.2) return root.classification = RootClass::runaway;
    return root.classification = RootClass::ambiguous;
}

RootClass classify_root(DispersionRoot& root, const Background& bg, const DispersionOptions& opt) {
    const double k = root.k;
    auto f = [&](Complex w, double t) {
        return warm_dispersion_function(w, k, bg, t, opt.q_over_m, opt.mass, opt.eps_res).value;
    };
    return classify_by_continuation(f, root, opt);
}

std::vector<DispersionRoot> find_roots(double k, const Background& bg, double tau, const std::vector<Complex>& seeds,
                                       const DispersionOptions& opt) {
    std::vector<DispersionRoot> roots;
    for (Complex seed : seeds) {
        const Complex w = newton_root(
            [&](Complex z) {
                return warm_dispersion_function(z, k, bg, tau, opt.q_over_m, opt.mass, opt.eps_res).value;
            },
            seed, opt);
        bool duplicate = false;
        for (const auto& r : roots)
            if (std::abs(r.omega - w) <= 1e-8 * std::max(1.0, std::abs(w))) duplicate = true;
        if (duplicate) continue;
        DispersionRoot r;
        r.omega = w;
        r.k = k;
        r.tau = tau;
        const DispersionValue v = warm_dispersion_function(w, k, bg, tau, opt.q_over_m, opt.mass, opt.eps_res);
        r.residual = std::abs(v.value);
        r.near_singular = v.near_singular;
        classify_root(r, bg, opt);
        roots.push_back(std::move(r));
    }
    return roots;
}

std::vector<DispersionRoot> dispersion_scan(const std::vector<double>& ks, const std::vector<double>& taus,
                                            const Background& bg, const DispersionOptions& opt) {
    const double omega_p = std::sqrt(opt.q_over_m * opt.q_over_m * opt.mass * bg.n0);
    std::vector<DispersionRoot> all;
    for (double k : ks)
        for (double tau : taus) {
            auto roots = find_roots(k, bg, tau, default_seeds(omega_p, tau), opt);
            all.insert(all.end(), roots.begin(), roots.end());
        }
    return all;
}

void write_scan_csv(std::ostream& out, const std::vector<DispersionRoot>& roots) {
    out << "k,tau,re_omega,im_omega,classification,residual\n";
    char buf[256];
    for (const auto& r : roots) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", r.k, r.tau, r.omega.real(),
                      r.omega.imag(), to_string(r.classification).c_str(), r.residual);
        out << buf;
    }
}

}  // namespace radkin
