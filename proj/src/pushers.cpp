#include "radkin/pushers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "radkin/errors.hpp"
#include "radkin/numerics.hpp"

namespace radkin {

namespace {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, class Rhs>
State<N> rk4_step(const State<N>& y, double h, Rhs&& rhs) {
    const auto axpy = [](const State<N>& a, double s, const State<N>& b) {
        State<N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
        return out;
    };
    const State<N> k1 = rhs(y);
    const State<N> k2 = rhs(axpy(y, 0.5 * h, k1));
    const State<N> k3 = rhs(axpy(y, 0.5 * h, k2));
    const State<N> k4 = rhs(axpy(y, h, k3));
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

FourVector take_x(const double* p) { return {{p[0], p[1], p[2], p[3]}}; }
Vec3 take_v(const double* p) { return {{p[0], p[1], p[2]}}; }

// Constraint residuals scaled by the natural size of each term, so that a
// highly relativistic sample is judged on relative rounding.
double scaled_residual(const ReducedState& s) {
    const FourVector u = s.velocity();
    const FourVector w = s.acceleration();
    const ConstraintResidual r = constraint_residuals(u, w);
    const double g2 = 1.0 + dot(s.v, s.v);
    double wn = 0.0;
    for (int i = 0; i < 4; ++i) wn += w[i] * w[i];
    return std::max(std::abs(r.phi1) / g2, std::abs(r.phi2) / (std::sqrt(g2) * std::sqrt(wn) + 1e-300));
}

bool finite(const ReducedState& s) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(s.x[i])) return false;
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(s.v[i]) || !std::isfinite(s.a[i])) return false;
    return true;
}

void check_sample(Trajectory& traj, const TrajectorySample& sample, double tolerance) {
    const double last = traj.samples.empty() ? 0.0 : traj.samples.back().lambda;
    if (!finite(sample.state))
        throw StepInstability("non-finite state at lambda=" + std::to_string(sample.lambda), last);
    if (scaled_residual(sample.state) > tolerance * 1e3)
        throw StepInstability("constraint residual blow-up at lambda=" + std::to_string(sample.lambda), last);
    traj.samples.push_back(sample);
}

int step_count(double lambda_end, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("pusher step must be positive");
    if (!(lambda_end >= 0.0)) throw std::invalid_argument("lambda_end must be non-negative");
    return static_cast<int>(std::ceil(lambda_end / step - 1e-9));
}

// Integrates (x, v) with dv/dλ = accel(x, v); records accel as the sample's a.
template <class Accel>
Trajectory push_second_order(const FourVector& x0, const Vec3& v0, double tau, double q_over_m,
                             const PusherConfig& cfg, double lambda_end, Accel&& accel) {
    Trajectory traj;
    traj.tau = tau;
    traj.q_over_m = q_over_m;
    const int n = step_count(lambda_end, cfg.step);
    const double h = n > 0 ? lambda_end / n : 0.0;

    auto rhs = [&](const State<7>& y) {
        const FourVector x = take_x(y.data());
        const Vec3 v = take_v(y.data() + 4);
        const FourVector u = lift_velocity(v);
        const Vec3 a = accel(x, v);
        return State<7>{u[0], u[1], u[2], u[3], a[0], a[1], a[2]};
    };
    State<7> y{x0[0], x0[1], x0[2], x0[3], v0[0], v0[1], v0[2]};
    traj.samples.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0;; ++i) {
        const FourVector x = take_x(y.data());
        const Vec3 v = take_v(y.data() + 4);
        check_sample(traj, {i * h, ReducedState{x, v, accel(x, v)}}, cfg.tolerance);
        if (i == n) break;
        y = rk4_step(y, h, rhs);
    }
    return traj;
}

}  // namespace

Vec3 lorentz_acceleration(const Vec3& v, const FieldTensor& field, double q_over_m) {
    const FourVector w = contract_mixed(field.F, lift_velocity(v));
    return {{-q_over_m * w[1], -q_over_m * w[2], -q_over_m * w[3]}};
}

LdDerivative ld_rhs(const ReducedState& s, const FieldTensor& field, double tau, double q_over_m) {
    const FourVector u = s.velocity();
    const FourVector w = s.acceleration();
    const double ww = minkowski_dot(w, w);
    const FourVector fu = contract_mixed(field.F, u);
    LdDerivative d;
    d.dx = u;
    d.dv = s.a;
    for (int mu = 0; mu < 3; ++mu) d.da[mu] = ww * s.v[mu] + (s.a[mu] + q_over_m * fu[mu + 1]) / tau;
    return d;
}

Vec3 landau_lifshitz_acceleration(const Vec3& v, const FieldTensor& field, double tau, double q_over_m) {
    const FourVector u = lift_velocity(v);
    const FourVector fu = contract_mixed(field.F, u);
    const FourVector ffu = contract_mixed(field.F, fu);
    const FourVector proj = orthogonal_projection(u, ffu);
    Vec3 out;
    for (int mu = 1; mu < 4; ++mu) {
        // (∂_d F^μ_b) ẋ^b ẋ^d; spatial μ so no sign flip on the first index.
        double dfuu = 0.0;
        for (int d = 0; d < 4; ++d)
            for (int b = 0; b < 4; ++b) dfuu += field.dF[d][mu][b] * u[b] * u[d];
        out[mu - 1] = -q_over_m * fu[mu] - q_over_m * tau * (dfuu - q_over_m * proj[mu]);
    }
    return out;
}

Vec3 series_first_order(const Vec3& v, const FieldTensor& field, double q_over_m) {
    const FourVector u = lift_velocity(v);
    const double gamma = u[0];
    const Vec3 a0 = lorentz_acceleration(v, field, q_over_m);
    const FourVector a0_lift = lift_acceleration(v, a0);
    const double a0a0 = minkowski_dot(a0_lift, a0_lift);
    const Tensor4 Fm = raise_first(field.F);
    Vec3 out;
    for (int mu = 1; mu < 4; ++mu) {
        // ẋ^a ∂_a A_(0)^μ = -(q/m) ẋ^a ẋ^b ∂_a F^μ_b
        double transport = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) transport += u[a] * u[b] * field.dF[a][mu][b];
        transport *= -q_over_m;
        // A_(0)^ν ∂A_(0)^μ/∂v^ν with ∂A_(0)^μ/∂v^ν = -(q/m)(F^μ_0 v^ν/γ + F^μ_ν)
        double advect = 0.0;
        for (int nu = 1; nu < 4; ++nu)
            advect += a0[nu - 1] * -q_over_m * (Fm[mu][0] * v[nu - 1] / gamma + Fm[mu][nu]);
        out[mu - 1] = transport + advect - v[mu - 1] * a0a0;
    }
    return out;
}

Vec3 series_acceleration(const FieldModel& model, const FourVector& x, const Vec3& v, double tau,
                         double q_over_m, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("series order must be 0, 1 or 2");
    const FieldTensor field = field_at(model, x);
    const Vec3 a0 = lorentz_acceleration(v, field, q_over_m);
    if (order == 0) return a0;
    const Vec3 a1 = series_first_order(v, field, q_over_m);
    Vec3 total = a0 + tau * a1;
    if (order == 1) return total;

    constexpr double h = 1e-5;
    const FourVector u = lift_velocity(v);
    const double gamma = u[0];
    const Tensor4 Fm = raise_first(field.F);

    // ẋ^a ∂_a A_(1) by central differences in spacetime.
    Vec3 transport{};
    for (int a = 0; a < 4; ++a) {
        FourVector xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const Vec3 d = (1.0 / (2.0 * h)) *
                       (series_first_order(v, field_at(model, xp), q_over_m) -
                        series_first_order(v, field_at(model, xm), q_over_m));
        transport += u[a] * d;
    }
    // ∂A_(1)/∂v^ν by central differences in velocity.
    std::array<Vec3, 3> da1{};
    for (int nu = 0; nu < 3; ++nu) {
        Vec3 vp = v, vm = v;
        vp[nu] += h;
        vm[nu] -= h;
        da1[static_cast<std::size_t>(nu)] =
            (1.0 / (2.0 * h)) * (series_first_order(vp, field, q_over_m) - series_first_order(vm, field, q_over_m));
    }
    const double a0a1 = minkowski_dot(lift_acceleration(v, a0), lift_acceleration(v, a1));
    Vec3 a2;
    for (int mu = 0; mu < 3; ++mu) {
        double s = transport[mu];
        for (int nu = 0; nu < 3; ++nu) {
            const double da0 = -q_over_m * (Fm[mu + 1][0] * v[nu] / gamma + Fm[mu + 1][nu + 1]);
            s += a1[nu] * da0 + a0[nu] * da1[static_cast<std::size_t>(nu)][mu];
        }
        a2[mu] = s - 2.0 * v[mu] * a0a1;
    }
    return total + (tau * tau) * a2;
}

Trajectory push_lorentz_dirac(const ReducedState& init, const FieldModel& model, double tau, double q_over_m,
                              const PusherConfig& cfg, double lambda_end) {
    if (tau < 0.0) throw std::invalid_argument("tau must be non-negative");
    if (tau == 0.0) {
        // Lorentz-force limit: the acceleration is slaved to its τ⁻¹ fixed point.
        return push_second_order(init.x, init.v, 0.0, q_over_m, cfg, lambda_end,
                                 [&](const FourVector& x, const Vec3& v) {
                                     return lorentz_acceleration(v, field_at(model, x), q_over_m);
                                 });
    }

    Trajectory traj;
    traj.tau = tau;
    traj.q_over_m = q_over_m;
    const int n = step_count(lambda_end, cfg.step);
    const double h = n > 0 ? lambda_end / n : 0.0;

    auto unpack = [](const State<10>& y) {
        return ReducedState{take_x(y.data()), take_v(y.data() + 4), take_v(y.data() + 7)};
    };
    auto rhs = [&](const State<10>& y) {
        const ReducedState s = unpack(y);
        const LdDerivative d = ld_rhs(s, field_at(model, s.x), tau, q_over_m);
        return State<10>{d.dx[0], d.dx[1], d.dx[2], d.dx[3], d.dv[0], d.dv[1], d.dv[2], d.da[0], d.da[1], d.da[2]};
    };
    State<10> y{init.x[0], init.x[1], init.x[2], init.x[3], init.v[0], init.v[1], init.v[2],
                init.a[0], init.a[1], init.a[2]};
    traj.samples.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0;; ++i) {
        check_sample(traj, {i * h, unpack(y)}, cfg.tolerance);
        if (i == n) break;
        y = rk4_step(y, h, rhs);
    }
    return traj;
}

Trajectory push_landau_lifshitz(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                                double q_over_m, const PusherConfig& cfg, double lambda_end) {
    return push_second_order(x0, v0, tau, q_over_m, cfg, lambda_end, [&](const FourVector& x, const Vec3& v) {
        return landau_lifshitz_acceleration(v, field_at(model, x), tau, q_over_m);
    });
}

Trajectory push_tau_series(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                           double q_over_m, const PusherConfig& cfg, double lambda_end) {
    const int order = cfg.series_order;
    if (order < 0 || order > 2) throw std::invalid_argument("series order must be 0, 1 or 2");
    return push_second_order(x0, v0, tau, q_over_m, cfg, lambda_end, [&](const FourVector& x, const Vec3& v) {
        return series_acceleration(model, x, v, tau, q_over_m, order);
    });
}

namespace {

// ∫_{λ_i}^{λ_{i+1}} f, fourth order on a uniform grid.
double segment_integral(const std::vector<double>& f, std::size_t i, double h) {
    const std::size_t n = f.size();
    if (n < 4) return 0.5 * h * (f[i] + f[i + 1]);
    if (i == 0) return h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    if (i + 2 >= n) return h / 24.0 * (f[i - 2] - 5.0 * f[i - 1] + 19.0 * f[i] + 9.0 * f[i + 1]);
    return h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
}

struct History {
    std::array<std::vector<double>, 3> a;  // spatial acceleration components
    std::array<std::vector<double>, 3> v;
    std::array<std::vector<double>, 4> x;
};

void integrate_history(History& hist, const FourVector& x0, const Vec3& v0, double h) {
    const std::size_t n = hist.a[0].size();
    for (int mu = 0; mu < 3; ++mu) {
        auto& vm = hist.v[static_cast<std::size_t>(mu)];
        const auto& am = hist.a[static_cast<std::size_t>(mu)];
        vm.assign(n, 0.0);
        vm[0] = v0[mu];
        for (std::size_t i = 0; i + 1 < n; ++i) vm[i + 1] = vm[i] + segment_integral(am, i, h);
    }
    std::array<std::vector<double>, 4> u;
    for (auto& c : u) c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FourVector ui = lift_velocity({{hist.v[0][i], hist.v[1][i], hist.v[2][i]}});
        for (std::size_t c = 0; c < 4; ++c) u[c][i] = ui[static_cast<int>(c)];
    }
    for (std::size_t c = 0; c < 4; ++c) {
        auto& xc = hist.x[c];
        xc.assign(n, 0.0);
        xc[0] = x0[static_cast<int>(c)];
        for (std::size_t i = 0; i + 1 < n; ++i) xc[i + 1] = xc[i] + segment_integral(u[c], i, h);
    }
}

}  // namespace

Trajectory push_dirac_asymptotic(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                                 double q_over_m, const PusherConfig& cfg, double lambda_end) {
    if (tau < 0.0) throw std::invalid_argument("tau must be non-negative");
    const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 10.0 * tau;
    if (horizon < 5.0 * tau) throw std::invalid_argument("dirac-asymptotic horizon must be >= 5 tau");
    const int n_end = step_count(lambda_end, cfg.step);
    const double h = n_end > 0 ? lambda_end / n_end : cfg.step;
    const int n_total = n_end + static_cast<int>(std::ceil(horizon / h - 1e-9));
    const auto n = static_cast<std::size_t>(n_total) + 1;

    // Initial guess: the Lorentz-force trajectory.
    PusherConfig lorentz_cfg = cfg;
    lorentz_cfg.tolerance = 1.0;
    const Trajectory guess = push_second_order(x0, v0, 0.0, q_over_m, lorentz_cfg, n_total * h,
                                               [&](const FourVector& x, const Vec3& v) {
                                                   return lorentz_acceleration(v, field_at(model, x), q_over_m);
                                               });
    History hist;
    for (std::size_t c = 0; c < 3; ++c) {
        hist.a[c].resize(n);
        for (std::size_t i = 0; i < n; ++i) hist.a[c][i] = guess.samples[i].state.a[static_cast<int>(c)];
    }

    const QuadratureRule laguerre = gauss_laguerre(cfg.laguerre_nodes);
    std::array<std::vector<double>, 3> force;
    for (auto& f : force) f.resize(n);
    std::array<std::vector<double>, 3> update;
    for (auto& u : update) u.resize(n);

    double change = 0.0;
    bool converged = false;
    for (int iter = 0; iter < cfg.max_picard_iters; ++iter) {
        integrate_history(hist, x0, v0, h);
        for (std::size_t i = 0; i < n; ++i) {
            const FourVector x{{hist.x[0][i], hist.x[1][i], hist.x[2][i], hist.x[3][i]}};
            const Vec3 v{{hist.v[0][i], hist.v[1][i], hist.v[2][i]}};
            const Vec3 a{{hist.a[0][i], hist.a[1][i], hist.a[2][i]}};
            const FourVector w = lift_acceleration(v, a);
            const Vec3 lorentz = lorentz_acceleration(v, field_at(model, x), q_over_m);
            const double ww = minkowski_dot(w, w);
            for (int c = 0; c < 3; ++c) force[static_cast<std::size_t>(c)][i] = lorentz[c] - tau * ww * v[c];
        }
        change = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                const double lam = static_cast<double>(i) * h;
                double s = 0.0;
                for (std::size_t k = 0; k < laguerre.nodes.size(); ++k)
                    s += laguerre.weights[k] * cubic_interpolate(force[c], 0.0, h, lam + laguerre.nodes[k] * tau);
                update[c][i] = s;
                change = std::max(change, std::abs(s - hist.a[c][i]));
            }
        }
        if (!std::isfinite(change)) break;
        if (change < cfg.tolerance) {
            hist.a = update;
            converged = true;
            break;
        }
        const double theta = cfg.picard_relaxation;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < n; ++i) hist.a[c][i] = (1.0 - theta) * hist.a[c][i] + theta * update[c][i];
    }
    if (!converged)
        throw ConvergenceFailure("dirac-asymptotic Picard iteration did not converge (sup change " +
                                     std::to_string(change) + ")",
                                 change);

    integrate_history(hist, x0, v0, h);
    Trajectory traj;
    traj.tau = tau;
    traj.q_over_m = q_over_m;
    traj.samples.reserve(static_cast<std::size_t>(n_end) + 1);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n_end); ++i) {
        ReducedState s{{{hist.x[0][i], hist.x[1][i], hist.x[2][i], hist.x[3][i]}},
                       {{hist.v[0][i], hist.v[1][i], hist.v[2][i]}},
                       {{hist.a[0][i], hist.a[1][i], hist.a[2][i]}}};
        traj.samples.push_back({static_cast<double>(i) * h, s});
    }
    return traj;
}

double fitted_acceleration_rate(const Trajectory& traj, double lo, double hi) {
    std::vector<double> lam, logacc;
    for (const auto& s : traj.samples) {
        if (s.lambda < lo || s.lambda > hi) continue;
        const FourVector w = s.state.acceleration();
        const double ww = minkowski_dot(w, w);
        if (!(ww > 0.0)) continue;
        lam.push_back(s.lambda);
        logacc.push_back(0.5 * std::log(ww));
    }
    return fit_line(lam, logacc).slope;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "lambda,x0,x1,x2,x3,v1,v2,v3,a1,a2,a3,phi1,phi2\n";
    char buf[64];
    auto put = [&](double value, bool last) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out << buf << (last ? '\n' : ',');
    };
    for (const auto& s : traj.samples) {
        const ConstraintResidual r = constraint_residuals(s.state.velocity(), s.state.acceleration());
        put(s.lambda, false);
        for (int i = 0; i < 4; ++i) put(s.state.x[i], false);
        for (int i = 0; i < 3; ++i) put(s.state.v[i], false);
        for (int i = 0; i < 3; ++i) put(s.state.a[i], false);
        put(r.phi1, false);
        put(r.phi2, true);
    }
}

}  // namespace radkin
