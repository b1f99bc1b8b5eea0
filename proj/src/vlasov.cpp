#include "radkin/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "radkin/entropy.hpp"
#include "radkin/errors.hpp"
#include "radkin/pushers.hpp"

namespace radkin {

kernels::Layout DistG::layout() const {
    if (grid.v[0].n != 1 || grid.v[1].n != 1)
        throw std::invalid_argument("the distribution is 1D1V: transverse velocity axes must be degenerate");
    return {grid.z.n, grid.v[2].n, grid.z.spacing(), grid.v[2].spacing()};
}

double DistG::total() const {
    const kernels::Layout lay = layout();
    double s = 0.0;
    for (double x : values) s += x;
    return s * lay.dz * lay.dv;
}

double PlasmaParams::omega_p() const { return std::sqrt(charge * charge * n0 / mass); }

namespace {

std::vector<double> column_speeds(const PhaseGrid& grid) {
    std::vector<double> s(static_cast<std::size_t>(grid.v[2].n));
    for (int j = 0; j < grid.v[2].n; ++j) {
        const double v = grid.v[2].node(j);
        s[static_cast<std::size_t>(j)] = v / std::sqrt(1.0 + v * v);
    }
    return s;
}

std::vector<double> densities(const DistG& g) {
    const kernels::Layout lay = g.layout();
    std::vector<double> n(static_cast<std::size_t>(lay.nz), 0.0);
    for (int i = 0; i < lay.nz; ++i) {
        double s = 0.0;
        for (int j = 0; j < lay.nv; ++j) s += g.values[static_cast<std::size_t>(i) * lay.nv + j];
        n[static_cast<std::size_t>(i)] = s * lay.dv;
    }
    return n;
}

kernels::ZSweep sweep_z(PlasmaState& s, const std::vector<double>& speed, double dt) {
    const kernels::Layout lay = s.g.layout();
    return s.params.parallel ? kernels::omp::advect_z(s.g.values, lay, speed, dt, s.params.scheme)
                             : kernels::serial::advect_z(s.g.values, lay, speed, dt, s.params.scheme);
}

kernels::VSweep sweep_v(PlasmaState& s, const std::vector<double>& accel, double dt) {
    const kernels::Layout lay = s.g.layout();
    return s.params.parallel ? kernels::omp::advect_v(s.g.values, lay, accel, dt, s.params.scheme)
                             : kernels::serial::advect_v(s.g.values, lay, accel, dt, s.params.scheme);
}

double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double v_limit(const PlasmaState& s, const std::vector<double>& accel) {
    const double a = max_abs(accel);
    return a > 0.0 ? 0.5 * s.g.grid.v[2].spacing() / a : std::numeric_limits<double>::infinity();
}

double z_limit(const PlasmaState& s, const std::vector<double>& speed) {
    const double c = max_abs(speed);
    return c > 0.0 ? 0.5 * s.g.grid.z.spacing() / c : std::numeric_limits<double>::infinity();
}

}  // namespace

PlasmaState make_state(DistG g, const PlasmaParams& params) {
    g.grid.validate();
    const kernels::Layout lay = g.layout();
    if (g.values.size() != lay.size()) throw std::invalid_argument("distribution size does not match its grid");
    PlasmaState s;
    s.params = params;
    const std::vector<double> n = densities(g);
    s.g = std::move(g);
    s.e_face.assign(static_cast<std::size_t>(lay.nz), 0.0);
    for (int i = 0; i + 1 < lay.nz; ++i)
        s.e_face[static_cast<std::size_t>(i) + 1] =
            s.e_face[static_cast<std::size_t>(i)] + lay.dz * params.charge * (n[static_cast<std::size_t>(i)] - params.n0);
    double mean = 0.0;
    for (double e : s.e_face) mean += e;
    mean /= lay.nz;
    for (double& e : s.e_face) e -= mean;
    reconstruct_accel(s);
    return s;
}

PlasmaState quiet_start(const QuietStart& cfg, const PlasmaParams& params) {
    const double length = cfg.length > 0.0 ? cfg.length : 2.0 * std::numbers::pi / 0.1;
    DistG g;
    g.grid = PhaseGrid::one_d_one_v(cfg.nz, length, cfg.nv, cfg.v_max);
    g.grid.validate();
    const Axis& vz = g.grid.v[2];
    const double dv = vz.spacing();
    const double width = cfg.v_width > 0.0 ? cfg.v_width : 3.0 * dv;

    std::vector<double> shape(static_cast<std::size_t>(cfg.nv));
    double norm = 0.0;
    for (int j = 0; j < cfg.nv; ++j) {
        const double x = (vz.node(j) - cfg.drift) / width;
        shape[static_cast<std::size_t>(j)] = std::exp(-0.5 * x * x);
        norm += shape[static_cast<std::size_t>(j)] * dv;
    }
    double tail = 0.0;
    for (int j = 0; j < cfg.nv; ++j) {
        shape[static_cast<std::size_t>(j)] /= norm;
        if (std::abs(vz.node(j)) > 0.9 * cfg.v_max) tail += shape[static_cast<std::size_t>(j)] * dv;
    }
    if (tail > 1e-10)
        throw DomainError("velocity box too small: mass fraction " + std::to_string(tail) + " beyond 0.9 v_max");

    const double k = 2.0 * std::numbers::pi * cfg.mode / length;
    const double dz = g.grid.z.spacing();
    g.values.resize(g.grid.size());
    for (int i = 0; i < cfg.nz; ++i) {
        // cell average of n₀(1 + α cos kz)
        const double zl = i * dz;
        const double avg = k != 0.0 ? (std::sin(k * (zl + dz)) - std::sin(k * zl)) / (k * dz) : 1.0;
        const double n = params.n0 * (1.0 + cfg.amplitude * avg);
        for (int j = 0; j < cfg.nv; ++j)
            g.values[static_cast<std::size_t>(i) * cfg.nv + j] = n * shape[static_cast<std::size_t>(j)];
    }
    return make_state(std::move(g), params);
}

CurrentMoment current_moment(const DistG& g, double charge) {
    const kernels::Layout lay = g.layout();
    const std::vector<double> speed = column_speeds(g.grid);
    CurrentMoment m;
    m.j0.assign(static_cast<std::size_t>(lay.nz), 0.0);
    m.j3.assign(static_cast<std::size_t>(lay.nz), 0.0);
    for (int i = 0; i < lay.nz; ++i) {
        double s0 = 0.0;
        double s3 = 0.0;
        for (int j = 0; j < lay.nv; ++j) {
            const double x = g.values[static_cast<std::size_t>(i) * lay.nv + j];
            s0 += x;
            s3 += x * speed[static_cast<std::size_t>(j)];
        }
        m.j0[static_cast<std::size_t>(i)] = charge * s0 * lay.dv;
        m.j3[static_cast<std::size_t>(i)] = charge * s3 * lay.dv;
    }
    return m;
}

std::vector<Tensor4> stress_moment(const DistG& g, double mass) {
    const kernels::Layout lay = g.layout();
    std::vector<Tensor4> out(static_cast<std::size_t>(lay.nz));
    for (int i = 0; i < lay.nz; ++i) {
        double s00 = 0.0;
        double s03 = 0.0;
        double s33 = 0.0;
        for (int j = 0; j < lay.nv; ++j) {
            const double v = g.grid.v[2].node(j);
            const double gamma = std::sqrt(1.0 + v * v);
            const double x = g.values[static_cast<std::size_t>(i) * lay.nv + j];
            s00 += x * gamma;
            s03 += x * v;
            s33 += x * v * v / gamma;
        }
        Tensor4& S = out[static_cast<std::size_t>(i)];
        S = {};
        S[0][0] = mass * s00 * lay.dv;
        S[0][3] = S[3][0] = mass * s03 * lay.dv;
        S[3][3] = mass * s33 * lay.dv;
    }
    return out;
}

FieldGrid field_grid(const PlasmaState& state) {
    const CurrentMoment cm = current_moment(state.g, state.params.charge);
    std::vector<double> dedt(cm.j3.size());
    for (std::size_t i = 0; i < dedt.size(); ++i) dedt[i] = -cm.j3[i];
    return FieldGrid::electrostatic(state.e_face, dedt, state.g.grid.z.spacing());
}

void reconstruct_accel(PlasmaState& state) {
    const FieldGrid field = field_grid(state);
    state.dedt.resize(field.at_z.size());
    for (std::size_t i = 0; i < field.at_z.size(); ++i) state.dedt[i] = field.at_z[i].dF[0][3][0];
    const PlasmaParams& p = state.params;
    const int order = p.tau > 0.0 ? p.order : 0;
    state.accel = build_accel_field(field, state.g.grid, p.q_over_m(), p.tau, std::min(order, 1));
    if (order >= 2) {
        const VectorGrid& a1 = state.accel.orders[1];
        VectorGrid da1(a1.size());
        if (!state.prev_a1.empty() && state.t > state.prev_a1_time) {
            const double inv = 1.0 / (state.t - state.prev_a1_time);
            for (std::size_t i = 0; i < a1.size(); ++i) da1[i] = inv * (a1[i] - state.prev_a1[i]);
        }
        for (int n = 2; n <= order; ++n)
            state.accel.orders.push_back(
                tau_recursion_step(state.accel.orders, {VectorGrid{}, da1}, field, state.g.grid, p.q_over_m()));
        state.prev_a1 = a1;
        state.prev_a1_time = state.t;
    }
}

std::vector<double> lab_acceleration(const PlasmaState& state) {
    const kernels::Layout lay = state.g.layout();
    const VectorGrid A = state.accel.total();
    if (A.size() != lay.size()) throw std::invalid_argument("acceleration field does not match the distribution");
    std::vector<double> out(lay.size());
    for (int i = 0; i < lay.nz; ++i)
        for (int j = 0; j < lay.nv; ++j) {
            const double v = state.g.grid.v[2].node(j);
            const std::size_t idx = static_cast<std::size_t>(i) * lay.nv + j;
            out[idx] = A[idx][2] / std::sqrt(1.0 + v * v);
        }
    return out;
}

std::vector<double> vlasov_rhs(const PlasmaState& state) {
    const kernels::Layout lay = state.g.layout();
    const std::vector<double>& g = state.g.values;
    const std::vector<double> speed = column_speeds(state.g.grid);
    const std::vector<double> accel = lab_acceleration(state);
    std::vector<double> rhs(lay.size(), 0.0);
    const int nz = lay.nz;
    const int nv = lay.nv;
    auto at = [&](int i, int j) { return g[static_cast<std::size_t>(i) * nv + j]; };

#pragma omp parallel for schedule(static)
    for (int i = 0; i < nz; ++i) {
        const int im = (i + nz - 1) % nz;
        const int ip = (i + 1) % nz;
        for (int j = 0; j < nv; ++j) {
            const double s = speed[static_cast<std::size_t>(j)];
            const double left = s * 0.5 * (at(im, j) + at(i, j));
            const double right = s * 0.5 * (at(i, j) + at(ip, j));
            double d = -(right - left) / lay.dz;

            const std::size_t row = static_cast<std::size_t>(i) * nv;
            const std::size_t idx = row + static_cast<std::size_t>(j);
            auto a_face = [&](int f) { return 0.5 * (accel[row + f - 1] + accel[row + f]); };
            double fl;
            double fr;
            if (j == 0)
                fl = accel[idx] < 0.0 ? accel[idx] * at(i, 0) : 0.0;
            else
                fl = a_face(j) * 0.5 * (at(i, j - 1) + at(i, j));
            if (j == nv - 1)
                fr = accel[idx] > 0.0 ? accel[idx] * at(i, j) : 0.0;
            else
                fr = a_face(j + 1) * 0.5 * (at(i, j) + at(i, j + 1));
            d -= (fr - fl) / lay.dv;
            rhs[idx] = d;
        }
    }
    return rhs;
}

std::vector<double> maxwell_step(const PlasmaState& state, double dt) {
    const CurrentMoment cm = current_moment(state.g, state.params.charge);
    const std::size_t n = state.e_face.size();
    std::vector<double> e = state.e_face;
    for (std::size_t i = 0; i < n; ++i) {
        const double j_face = 0.5 * (cm.j3[(i + n - 1) % n] + cm.j3[i]);
        e[i] -= dt * j_face;  // the background current J³_ext vanishes
    }
    return e;
}

double stable_dt(const PlasmaState& state) {
    return std::min(z_limit(state, column_speeds(state.g.grid)), v_limit(state, lab_acceleration(state)));
}

void advance(PlasmaState& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const std::vector<double> speed = column_speeds(state.g.grid);
    const double before = stable_dt(state);
    if (dt > before) throw CflViolation("time step " + std::to_string(dt) + " exceeds the CFL limit", before);

    const std::vector<double> saved_g = state.g.values;
    const std::vector<double> saved_e = state.e_face;
    const double t0 = state.t;
    const double q = state.params.charge;
    auto ampere = [&](const kernels::ZSweep& sweep, double h) {
        for (std::size_t i = 0; i < state.e_face.size(); ++i) state.e_face[i] -= h * q * sweep.face_flux[i];
    };

    ampere(sweep_z(state, speed, 0.5 * dt), 0.5 * dt);
    state.t = t0 + 0.5 * dt;
    reconstruct_accel(state);
    const std::vector<double> accel = lab_acceleration(state);
    const double limit = v_limit(state, accel);
    if (dt > limit) {
        state.g.values = saved_g;
        state.e_face = saved_e;
        state.t = t0;
        reconstruct_accel(state);
        throw CflViolation("time step " + std::to_string(dt) + " exceeds the CFL limit of the acceleration", limit);
    }
    state.boundary_loss += sweep_v(state, accel, dt).boundary_loss;
    ampere(sweep_z(state, speed, 0.5 * dt), 0.5 * dt);
    state.t = t0 + dt;
}

PlasmaState step(const PlasmaState& state, double dt) {
    PlasmaState next = state;
    advance(next, dt);
    return next;
}

Diagnostics diagnostics(const PlasmaState& state) {
    const kernels::Layout lay = state.g.layout();
    const PhaseGrid& grid = state.g.grid;
    Diagnostics d;
    d.t = state.t;
    for (double e : state.e_face) d.field_energy += 0.5 * e * e * lay.dz;
    for (int i = 0; i < lay.nz; ++i)
        for (int j = 0; j < lay.nv; ++j) {
            const double v = grid.v[2].node(j);
            const double x = state.g.values[static_cast<std::size_t>(i) * lay.nv + j];
            d.kinetic_energy += state.params.mass * (std::sqrt(1.0 + v * v) - 1.0) * x;
            d.n_tot += x;
        }
    d.kinetic_energy *= lay.dz * lay.dv;
    d.n_tot *= lay.dz * lay.dv;

    const CurrentMoment cm = current_moment(state.g, state.params.charge);
    const double k = 2.0 * std::numbers::pi / (grid.z.hi - grid.z.lo);
    double c = 0.0;
    double s = 0.0;
    for (int i = 0; i < lay.nz; ++i) {
        c += cm.j3[static_cast<std::size_t>(i)] * std::cos(k * grid.z.node(i));
        s += cm.j3[static_cast<std::size_t>(i)] * std::sin(k * grid.z.node(i));
    }
    d.j1_mode_amplitude = 2.0 / lay.nz * std::hypot(c, s);
    d.entropy = entropy_total(state.g);

    const std::size_t n = state.e_face.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double div = (state.e_face[(i + 1) % n] - state.e_face[i]) / lay.dz;
        const double rho = cm.j0[i] - state.params.charge * state.params.n0;
        d.gauss_residual = std::max(d.gauss_residual, std::abs(div - rho));
    }
    return d;
}

double leray_divergence(const ReducedState& point, const FieldModel& model, double tau, double q_over_m, double h) {
    if (!(tau > 0.0)) throw std::invalid_argument("the phase-space divergence needs tau > 0");
    using Coords = std::array<double, 10>;
    auto pack = [](const ReducedState& s) {
        return Coords{s.x[0], s.x[1], s.x[2], s.x[3], s.v[0], s.v[1], s.v[2], s.a[0], s.a[1], s.a[2]};
    };
    auto unpack = [](const Coords& c) {
        ReducedState s;
        s.x = {{c[0], c[1], c[2], c[3]}};
        s.v = {{c[4], c[5], c[6]}};
        s.a = {{c[7], c[8], c[9]}};
        return s;
    };
    // Component i of w·X, with w = 1/(1+|v|²) the fibre weight of ω.
    auto weighted = [&](const Coords& c, int i) {
        const ReducedState s = unpack(c);
        const LdDerivative d = ld_rhs(s, field_at(model, s.x), tau, q_over_m);
        const double w = leray_weights(s.v).fiber_weight;
        if (i < 4) return w * d.dx[i];
        if (i < 7) return w * d.dv[i - 4];
        return w * d.da[i - 7];
    };
    const Coords base = pack(point);
    double div = 0.0;
    for (int i = 0; i < 10; ++i) {
        Coords up = base;
        Coords dn = base;
        up[static_cast<std::size_t>(i)] += h;
        dn[static_cast<std::size_t>(i)] -= h;
        div += (weighted(up, i) - weighted(dn, i)) / (2.0 * h);
    }
    return div / leray_weights(point.v).fiber_weight;
}

}  // namespace radkin
