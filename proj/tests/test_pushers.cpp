#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "radkin/numerics.hpp"
#include "radkin/pushers.hpp"

using namespace radkin;

namespace {

constexpr double kQm = -1.0;

double max_velocity_gap(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.samples.size() == b.samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        sup = std::max(sup, norm(a.samples[i].state.v - b.samples[i].state.v));
    return sup;
}

double proper_accel(const ReducedState& s) {
    const FourVector w = s.acceleration();
    return std::sqrt(std::max(0.0, minkowski_dot(w, w)));
}

PusherConfig config(double step) {
    PusherConfig c;
    c.step = step;
    return c;
}

}  // namespace

TEST_CASE("ld_rhs: free inertial motion is a fixed point") {
    ReducedState s;
    s.v = {{0.3, -1.2, 2.0}};
    const LdDerivative d = ld_rhs(s, FieldTensor{}, 0.05, kQm);
    CHECK(norm(d.dv) == 0.0);
    CHECK(norm(d.da) == 0.0);
}

TEST_CASE("ld_rhs: at rest the runaway term is a/tau") {
    const double g0 = 2.0;
    const double tau = 0.1;
    ReducedState s;
    s.a = {{g0, 0.0, 0.0}};
    const LdDerivative d = ld_rhs(s, FieldTensor{}, tau, kQm);
    CHECK(d.da[0] == doctest::Approx(g0 / tau));
    CHECK(d.da[1] == 0.0);
    CHECK(d.da[2] == 0.0);
    CHECK(d.dv[0] == g0);
}

TEST_CASE("ld_rhs: moving particle picks up the (a.a) v term") {
    // v = (0,0,1): γ = √2, ẍ⁰ = a·v/γ = g₀/√2, ẍ·ẍ = g₀² - g₀²/2
    const double g0 = 0.8;
    const double tau = 0.2;
    ReducedState s;
    s.v = {{0.0, 0.0, 1.0}};
    s.a = {{0.0, 0.0, g0}};
    const LdDerivative d = ld_rhs(s, FieldTensor{}, tau, kQm);
    CHECK(d.da[2] == doctest::Approx(0.5 * g0 * g0 + g0 / tau).epsilon(1e-14));
}

TEST_CASE("Lorentz-Dirac push: F = 0 and a = 0 is a straight worldline") {
    ReducedState init;
    init.v = {{0.4, 0.0, -0.2}};
    const Trajectory t = push_lorentz_dirac(init, UniformElectric{}, 0.01, kQm, config(1e-3), 0.5);
    for (const auto& s : t.samples) {
        CHECK(norm(s.state.a) == 0.0);
        CHECK(s.state.v == init.v);
    }
    const double gamma = lorentz_factor(init.v);
    CHECK(t.samples.back().state.x[0] == doctest::Approx(0.5 * gamma).epsilon(1e-13));
}

TEST_CASE("Lorentz-Dirac push: runaway proper acceleration grows at 1/tau") {
    const double tau = 0.01;
    ReducedState init;
    init.a = {{1.0, 0.0, 0.0}};
    const Trajectory t = push_lorentz_dirac(init, UniformElectric{}, tau, kQm, config(1e-3 * tau), 5.0 * tau);
    const double rate = fitted_acceleration_rate(t, 0.0, 5.0 * tau);
    CHECK(std::abs(rate * tau - 1.0) < 0.01);
}

TEST_CASE("Lorentz-Dirac push at tau = 0 gives a circular orbit in uniform B") {
    const UniformMagnetic model{{{0.0, 0.0, 1.0}}};
    ReducedState init;
    init.v = {{0.5, 0.0, 0.0}};
    const Trajectory t = push_lorentz_dirac(init, model, 0.0, kQm, config(1e-3), 2.0 * std::numbers::pi);
    for (const auto& s : t.samples) CHECK(dot(s.state.v, s.state.v) == doctest::Approx(0.25).epsilon(1e-10));
    // one gyroperiod in proper time returns to the start
    CHECK(norm(t.samples.back().state.v - init.v) < 1e-10);
    CHECK(std::abs(t.samples.back().state.x[1]) < 1e-10);
}

TEST_CASE("Landau-Lifshitz at tau = 0 is the Lorentz-force integration") {
    const UniformMagnetic model{{{0.3, 0.0, 1.0}}};
    const Vec3 v0{{0.5, 0.2, 0.0}};
    ReducedState init;
    init.v = v0;
    const Trajectory lorentz = push_lorentz_dirac(init, model, 0.0, kQm, config(1e-3), 3.0);
    const Trajectory ll = push_landau_lifshitz({}, v0, model, 0.0, kQm, config(1e-3), 3.0);
    CHECK(max_velocity_gap(lorentz, ll) == 0.0);
    for (const auto& s : ll.samples) CHECK(dot(s.state.v, s.state.v) == doctest::Approx(dot(v0, v0)).epsilon(1e-10));
}

TEST_CASE("Landau-Lifshitz in uniform B: transverse energy decays monotonically and self-converges") {
    const UniformMagnetic model{{{0.0, 0.0, 1.0}}};
    const double tau = 0.01;
    const double period = 2.0 * std::numbers::pi;
    const Vec3 v0{{0.5, 0.0, 0.0}};
    const Trajectory coarse = push_landau_lifshitz({}, v0, model, tau, kQm, config(1e-3), period);
    const Trajectory fine = push_landau_lifshitz({}, v0, model, tau, kQm, config(1e-4), period);
    for (std::size_t i = 1; i < coarse.samples.size(); ++i)
        CHECK(dot(coarse.samples[i].state.v, coarse.samples[i].state.v) <
              dot(coarse.samples[i - 1].state.v, coarse.samples[i - 1].state.v));
    const double ratio_coarse = dot(coarse.samples.back().state.v, coarse.samples.back().state.v) / dot(v0, v0);
    const double ratio_fine = dot(fine.samples.back().state.v, fine.samples.back().state.v) / dot(v0, v0);
    CHECK(ratio_coarse < 1.0);
    CHECK(std::abs(ratio_coarse / ratio_fine - 1.0) < 1e-3);
}

TEST_CASE("Landau-Lifshitz: hyperbolic motion along E has no radiation correction") {
    const UniformElectric model{{{0.0, 0.0, 0.7}}};
    const double tau = 0.05;
    const Vec3 v0{{0.0, 0.0, 0.3}};
    const Trajectory ll = push_landau_lifshitz({}, v0, model, tau, kQm, config(1e-3), 2.0);
    ReducedState init;
    init.v = v0;
    const Trajectory lorentz = push_lorentz_dirac(init, model, 0.0, kQm, config(1e-3), 2.0);
    CHECK(max_velocity_gap(ll, lorentz) < 1e-12);
    for (const auto& s : ll.samples) {
        const FieldTensor f = field_at(model, s.state.x);
        const Vec3 gap = landau_lifshitz_acceleration(s.state.v, f, tau, kQm) - lorentz_acceleration(s.state.v, f, kQm);
        CHECK(norm(gap) < 1e-14 * (1.0 + dot(s.state.v, s.state.v)));
    }
}

TEST_CASE("Landau-Lifshitz RK4 converges at fourth order") {
    const UniformMagnetic model{{{0.2, 0.0, 1.0}}};
    const Vec3 v0{{0.6, 0.1, 0.0}};
    const double tau = 0.02;
    auto final_v = [&](double h) { return push_landau_lifshitz({}, v0, model, tau, kQm, config(h), 2.0).samples.back().state.v; };
    const Vec3 v1 = final_v(0.04);
    const Vec3 v2 = final_v(0.02);
    const Vec3 v3 = final_v(0.01);
    const double ratio = norm(v1 - v2) / norm(v2 - v3);
    CHECK(std::log2(ratio) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("tau-series: order 0 is Lorentz, order 1 is Landau-Lifshitz") {
    const UniformMagnetic model{{{0.0, 0.4, 1.0}}};
    const double tau = 0.01;
    const Vec3 v0{{0.5, 0.0, 0.2}};
    PusherConfig c = config(1e-3);
    c.series_order = 0;
    ReducedState init;
    init.v = v0;
    const Trajectory s0 = push_tau_series({}, v0, model, tau, kQm, c, 2.0);
    const Trajectory lorentz = push_lorentz_dirac(init, model, 0.0, kQm, c, 2.0);
    CHECK(max_velocity_gap(s0, lorentz) == 0.0);

    c.series_order = 1;
    const Trajectory s1 = push_tau_series({}, v0, model, tau, kQm, c, 2.0);
    const Trajectory ll = push_landau_lifshitz({}, v0, model, tau, kQm, c, 2.0);
    for (std::size_t i = 0; i < ll.samples.size(); ++i) {
        const Vec3 a = ll.samples[i].state.v;
        CHECK(norm(s1.samples[i].state.v - a) <= 1e-12 * norm(a));
    }
}

TEST_CASE("tau-series: order 2 differs from order 1 at second order in tau") {
    const UniformMagnetic model{{{0.0, 0.0, 1.0}}};
    const Vec3 v0{{0.5, 0.0, 0.0}};
    std::vector<double> lt;
    std::vector<double> lg;
    for (double tau : {0.02, 0.01, 0.005}) {
        PusherConfig c = config(1e-3);
        c.series_order = 1;
        const Trajectory s1 = push_tau_series({}, v0, model, tau, kQm, c, 3.0);
        c.series_order = 2;
        const Trajectory s2 = push_tau_series({}, v0, model, tau, kQm, c, 3.0);
        lt.push_back(std::log(tau));
        lg.push_back(std::log(max_velocity_gap(s1, s2)));
    }
    CHECK(fit_line(lt, lg).slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Dirac asymptotic: zero field gives zero acceleration") {
    const Trajectory t = push_dirac_asymptotic({}, {{0.5, 0.0, 0.3}}, UniformElectric{}, 0.01, kQm, config(1e-3), 1.0);
    for (const auto& s : t.samples) CHECK(norm(s.state.a) == 0.0);
}

TEST_CASE("Dirac asymptotic agrees with Landau-Lifshitz to second order in a weak electric field") {
    const UniformElectric model{{{0.05, 0.0, 0.02}}};
    const Vec3 v0{{0.0, 0.3, 0.0}};
    std::vector<double> lt;
    std::vector<double> lg;
    for (double tau : {0.04, 0.02, 0.01}) {
        const Trajectory ll = push_landau_lifshitz({}, v0, model, tau, kQm, config(1e-3), 3.0);
        const Trajectory da = push_dirac_asymptotic({}, v0, model, tau, kQm, config(1e-3), 3.0);
        lt.push_back(std::log(tau));
        lg.push_back(std::log(max_velocity_gap(ll, da)));
    }
    CHECK(fit_line(lt, lg).slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Dirac asymptotic pre-accelerates ahead of a field switched on suddenly") {
    const double tau = 0.05;
    const double t_on = 0.6;
    UniformElectric model{{{0.0, 0.0, 0.01}}};
    model.envelope = {true, t_on, 0.0};
    PusherConfig c = config(2e-3);
    c.tolerance = 1e-14;
    const Trajectory t = push_dirac_asymptotic({}, {}, model, tau, kQm, c, 1.0);
    std::vector<double> lam;
    std::vector<double> lg;
    for (const auto& s : t.samples) {
        if (s.lambda < t_on - 6.0 * tau || s.lambda > t_on - tau) continue;
        lam.push_back(s.lambda);
        lg.push_back(std::log(proper_accel(s.state)));
    }
    CHECK(norm(t.samples[static_cast<std::size_t>(0.5 / 2e-3)].state.a) > 0.0);
    CHECK(fit_line(lam, lg).slope * tau == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("all pushers keep the constraints and the free-particle fixed point") {
    const UniformMagnetic model{{{0.1, 0.0, 1.0}}};
    const Vec3 v0{{0.7, -0.2, 0.1}};
    const double tau = 0.01;
    PusherConfig c = config(1e-3);
    std::vector<Trajectory> runs;
    runs.push_back(push_landau_lifshitz({}, v0, model, tau, kQm, c, 1.0));
    runs.push_back(push_tau_series({}, v0, model, tau, kQm, c, 1.0));
    runs.push_back(push_dirac_asymptotic({}, v0, model, tau, kQm, c, 1.0));
    ReducedState init;
    init.v = v0;
    init.a = landau_lifshitz_acceleration(v0, field_at(model, {}), tau, kQm);
    runs.push_back(push_lorentz_dirac(init, model, tau, kQm, c, 0.05));
    for (const auto& t : runs)
        for (const auto& s : t.samples) {
            const auto r = constraint_residuals(s.state.velocity(), s.state.acceleration());
            const double g = lorentz_factor(s.state.v);
            CHECK(std::abs(r.phi1) <= c.tolerance * g * g);
            CHECK(std::abs(r.phi2) <= c.tolerance * g * (1.0 + norm(s.state.a)));
        }

    for (auto* push : {&push_landau_lifshitz, &push_tau_series, &push_dirac_asymptotic}) {
        const Trajectory t = (*push)({}, v0, UniformElectric{}, tau, kQm, c, 0.5);
        for (const auto& s : t.samples) CHECK(norm(s.state.a) == 0.0);
    }
}

TEST_CASE("trajectory CSV has the documented header and one row per sample") {
    const Trajectory t = push_landau_lifshitz({}, {{0.1, 0, 0}}, UniformMagnetic{{{0, 0, 1}}}, 0.0, kQm, config(0.1), 0.5);
    std::ostringstream out;
    write_trajectory_csv(out, t);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "lambda,x0,x1,x2,x3,v1,v2,v3,a1,a2,a3,phi1,phi2");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(t.samples.size()));
}
