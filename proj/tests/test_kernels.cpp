#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "radkin/kernels.hpp"

using namespace radkin;
using namespace radkin::kernels;

namespace {

Layout layout() { return {48, 40, 0.25, 0.05}; }

std::vector<double> bump_field(const Layout& lay, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(0.0, 0.2);
    std::vector<double> g(lay.size());
    for (int i = 0; i < lay.nz; ++i)
        for (int j = 0; j < lay.nv; ++j) {
            const double v = (j - lay.nv / 2 + 0.5) / (lay.nv / 8.0);
            g[static_cast<std::size_t>(i) * lay.nv + j] =
                std::exp(-v * v) * (1.0 + 0.5 * std::sin(0.3 * i)) + (j > 3 && j < lay.nv - 4 ? noise(rng) : 0.0);
        }
    return g;
}

std::vector<double> speeds(const Layout& lay) {
    std::vector<double> s(static_cast<std::size_t>(lay.nv));
    for (int j = 0; j < lay.nv; ++j) s[static_cast<std::size_t>(j)] = 0.9 * std::sin(0.7 * j);
    return s;
}

std::vector<double> accels(const Layout& lay) {
    std::vector<double> a(lay.size());
    for (int i = 0; i < lay.nz; ++i)
        for (int j = 0; j < lay.nv; ++j) a[static_cast<std::size_t>(i) * lay.nv + j] = 0.4 * std::cos(0.2 * i + 0.1 * j);
    return a;
}

double sum(const std::vector<double>& g) { return std::accumulate(g.begin(), g.end(), 0.0); }

const AdvectionScheme kSchemes[] = {AdvectionScheme::LaxWendroffPositive, AdvectionScheme::VanLeer};

}  // namespace

TEST_CASE("serial and OpenMP sweeps are bit-identical") {
    const Layout lay = layout();
    for (AdvectionScheme scheme : kSchemes) {
        std::vector<double> a = bump_field(lay, 1);
        std::vector<double> b = a;
        for (int n = 0; n < 10; ++n) {
            const ZSweep za = serial::advect_z(a, lay, speeds(lay), 0.1, scheme);
            const ZSweep zb = omp::advect_z(b, lay, speeds(lay), 0.1, scheme);
            CHECK(za.face_flux == zb.face_flux);
            const VSweep va = serial::advect_v(a, lay, accels(lay), 0.05, scheme);
            const VSweep vb = omp::advect_v(b, lay, accels(lay), 0.05, scheme);
            CHECK(va.boundary_loss == vb.boundary_loss);
        }
        CHECK(a == b);
    }
}

TEST_CASE("z sweep conserves the total and keeps g non-negative") {
    const Layout lay = layout();
    for (AdvectionScheme scheme : kSchemes) {
        std::vector<double> g = bump_field(lay, 2);
        const double before = sum(g);
        for (int n = 0; n < 50; ++n) serial::advect_z(g, lay, speeds(lay), 0.2, scheme);
        CHECK(sum(g) == doctest::Approx(before).epsilon(1e-13));
        CHECK(*std::min_element(g.begin(), g.end()) >= 0.0);
    }
}

TEST_CASE("v sweep loses exactly what crosses the velocity boundary") {
    const Layout lay = layout();
    for (AdvectionScheme scheme : kSchemes) {
        std::vector<double> g(lay.size(), 1.0);
        const std::vector<double> a(lay.size(), 0.3);
        const double before = sum(g) * lay.dz * lay.dv;
        double lost = 0.0;
        for (int n = 0; n < 20; ++n) lost += serial::advect_v(g, lay, a, 0.05, scheme).boundary_loss;
        CHECK(lost > 0.0);
        CHECK(sum(g) * lay.dz * lay.dv + lost == doctest::Approx(before).epsilon(1e-13));
        CHECK(*std::min_element(g.begin(), g.end()) >= 0.0);
    }
}

TEST_CASE("uniform g in z is unchanged by the z sweep") {
    const Layout lay = layout();
    std::vector<double> g(lay.size());
    for (int i = 0; i < lay.nz; ++i)
        for (int j = 0; j < lay.nv; ++j) g[static_cast<std::size_t>(i) * lay.nv + j] = 1.0 + 0.1 * j;
    const std::vector<double> before = g;
    for (AdvectionScheme scheme : kSchemes) serial::advect_z(g, lay, speeds(lay), 0.1, scheme);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(before[i]).epsilon(1e-14));
}

TEST_CASE("Courant number one translates by exactly one cell") {
    Layout lay{32, 1, 0.5, 1.0};
    std::vector<double> g(32, 0.0);
    for (int i = 10; i < 14; ++i) g[static_cast<std::size_t>(i)] = 1.0 + i;
    const std::vector<double> speed = {1.0};
    std::vector<double> shifted = g;
    serial::advect_z(shifted, lay, speed, 0.5, AdvectionScheme::LaxWendroffPositive);
    for (int i = 0; i < 32; ++i) CHECK(shifted[static_cast<std::size_t>((i + 1) % 32)] == doctest::Approx(g[static_cast<std::size_t>(i)]));
}

TEST_CASE("z face fluxes integrate the transported number") {
    const Layout lay = layout();
    std::vector<double> g = bump_field(lay, 3);
    std::vector<double> before = g;
    const ZSweep z = serial::advect_z(g, lay, speeds(lay), 0.1, AdvectionScheme::LaxWendroffPositive);
    // n_i changes by -(flux_{i+1} - flux_i) dt / dz
    for (int i = 0; i < lay.nz; ++i) {
        double dn = 0.0;
        for (int j = 0; j < lay.nv; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * lay.nv + j;
            dn += (g[k] - before[k]) * lay.dv;
        }
        const double expected = -(z.face_flux[static_cast<std::size_t>((i + 1) % lay.nz)] - z.face_flux[static_cast<std::size_t>(i)]) * 0.1 / lay.dz;
        CHECK(dn == doctest::Approx(expected).epsilon(1e-10).scale(1e-3));
    }
}
