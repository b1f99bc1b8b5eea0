#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "radkin/numerics.hpp"
#include "radkin/pushers.hpp"
#include "radkin/submanifold.hpp"

using namespace radkin;

namespace {

constexpr double kQm = -1.0;

PhaseGrid cube(int n, double half_width) {
    PhaseGrid g;
    g.z = {1, 0.0, 1.0};
    g.v = {Axis::centered(n, half_width), Axis::centered(n, half_width), Axis::centered(n, half_width)};
    return g;
}

double residual_norm(const FieldModel& model, const PhaseGrid& grid, double tau, int order) {
    const FieldGrid f = FieldGrid::sample(model, grid, 0.0);
    return max_norm(accel_pde_residual(build_accel_field(f, grid, kQm, tau, order), {}, f, kQm));
}

}  // namespace

TEST_CASE("phase grid validation") {
    CHECK_NOTHROW(cube(8, 1.0).validate());
    CHECK_THROWS_AS(cube(5, 1.0).validate(), std::invalid_argument);
    PhaseGrid g = PhaseGrid::one_d_one_v(16, 1.0, 16, 0.5);
    CHECK_NOTHROW(g.validate());
    g.v[0] = Axis::transverse_stencil(1e-3);
    CHECK_NOTHROW(g.validate());
    g.z = {4, 0.0, 1.0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("zero field gives zero acceleration at every order") {
    const PhaseGrid grid = cube(8, 1.0);
    const FieldGrid f = FieldGrid::sample(UniformElectric{}, grid, 0.0);
    const AccelField a = build_accel_field(f, grid, kQm, 0.1, 2);
    for (const auto& order : a.orders) CHECK(max_norm(order) == 0.0);
    CHECK(max_norm(accel_pde_residual(a, {}, f, kQm)) == 0.0);
}

TEST_CASE("A_(0) for a uniform electric field at rest is (q/m) E") {
    PhaseGrid grid = PhaseGrid::one_d_one_v(1, 1.0, 9, 1.0);
    const double E = 0.3;
    const FieldGrid f = FieldGrid::sample(UniformElectric{{{0, 0, E}}}, grid, 0.0);
    const VectorGrid a0 = a0_field(f, grid, kQm);
    // node 4 of 9 is v = 0
    CHECK(grid.v[2].node(4) == doctest::Approx(0.0));
    const Vec3& a = a0[grid.index(0, 0, 0, 4)];
    CHECK(a[2] == doctest::Approx(kQm * E));
    CHECK(a[0] == 0.0);
    CHECK(a[1] == 0.0);
}

TEST_CASE("A_(0) for a uniform magnetic field is along y with magnitude |q/m| v B") {
    PhaseGrid grid;
    grid.z = {1, 0.0, 1.0};
    grid.v = {Axis::centered(8, 1.0), Axis::degenerate(), Axis::degenerate()};
    const double B = 2.0;
    const FieldGrid f = FieldGrid::sample(UniformMagnetic{{{0, 0, B}}}, grid, 0.0);
    const VectorGrid a0 = a0_field(f, grid, kQm);
    for (int i = 0; i < 8; ++i) {
        const double v = grid.v[0].node(i);
        const Vec3& a = a0[grid.index(0, i, 0, 0)];
        CHECK(a[0] == 0.0);
        CHECK(a[2] == 0.0);
        CHECK(std::abs(a[1]) == doctest::Approx(std::abs(kQm * v * B)));
        // du/dλ = (q/m) u × B
        CHECK(a[1] == doctest::Approx(-kQm * v * B));
    }
}

TEST_CASE("first-order recursion for uniform B reproduces Landau-Lifshitz at every node") {
    const PhaseGrid grid = cube(9, 1.5);
    const UniformMagnetic model{{{0.3, -0.4, 1.1}}};
    const FieldGrid f = FieldGrid::sample(model, grid, 0.0);
    const double tau = 0.01;
    const AccelField a = build_accel_field(f, grid, kQm, tau, 1);
    const VectorGrid total = a.total();
    const FieldTensor ft = field_at(model, {});
    for (int i1 = 0; i1 < 9; ++i1)
        for (int i2 = 0; i2 < 9; ++i2)
            for (int i3 = 0; i3 < 9; ++i3) {
                const Vec3 v = grid.velocity(i1, i2, i3);
                const Vec3 ll = landau_lifshitz_acceleration(v, ft, tau, kQm);
                const Vec3& got = total[grid.index(0, i1, i2, i3)];
                CHECK(norm(got - ll) <= 1e-12 * norm(ll));
            }
}

TEST_CASE("first-order recursion in a uniform static field drops the streaming term") {
    const PhaseGrid grid = cube(8, 1.0);
    const FieldGrid f = FieldGrid::sample(UniformElectric{{{0.1, 0.2, 0.3}}}, grid, 0.0);
    const VectorGrid a0 = a0_field(f, grid, kQm);
    const VectorGrid a1 = tau_recursion_step({a0}, {}, f, grid, kQm);
    // Interior nodes, where v_derivative is the plain central difference.
    for (int i1 = 1; i1 < 7; ++i1)
        for (int i2 = 1; i2 < 7; ++i2)
            for (int i3 = 1; i3 < 7; ++i3) {
                const std::size_t idx = grid.index(0, i1, i2, i3);
                const Vec3 v = grid.velocity(i1, i2, i3);
                Vec3 expect;
                for (int k = 0; k < 3; ++k) {
                    int up[3] = {i1, i2, i3};
                    int dn[3] = {i1, i2, i3};
                    ++up[k];
                    --dn[k];
                    const Vec3 d = (0.5 / grid.v[k].spacing()) *
                                   (a0[grid.index(0, up[0], up[1], up[2])] - a0[grid.index(0, dn[0], dn[1], dn[2])]);
                    expect += a0[idx][k] * d;
                }
                const FourVector w = lift_acceleration(v, a0[idx]);
                expect = expect - minkowski_dot(w, w) * v;
                CHECK(norm(a1[idx] - expect) <= 1e-13 * (1.0 + norm(expect)));
            }
}

TEST_CASE("order-0 residual: the radiation bracket vanishes, the rest is tau independent") {
    const PhaseGrid grid = cube(8, 1.0);
    const UniformMagnetic model{{{0.0, 0.0, 1.0}}};
    const double r1 = residual_norm(model, grid, 0.1, 0);
    const double r2 = residual_norm(model, grid, 0.001, 0);
    CHECK(r1 > 0.0);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("truncated series residual scales as tau^N") {
    const PhaseGrid grid = cube(10, 1.0);
    const UniformMagnetic model{{{0.2, 0.0, 1.0}}};
    for (int order : {1, 2}) {
        std::vector<double> lt;
        std::vector<double> lr;
        for (double tau : {0.04, 0.02, 0.01, 0.005}) {
            lt.push_back(std::log(tau));
            lr.push_back(std::log(residual_norm(model, grid, tau, order)));
        }
        CHECK(fit_line(lt, lr).slope == doctest::Approx(order).epsilon(0.2 / order));
    }
}

TEST_CASE("accel CSV header and row count") {
    const PhaseGrid grid = PhaseGrid::one_d_one_v(8, 1.0, 8, 0.5);
    const FieldGrid f = FieldGrid::sample(UniformElectric{{{0, 0, 0.1}}}, grid, 0.0);
    std::ostringstream out;
    write_accel_csv(out, build_accel_field(f, grid, kQm, 0.01, 1));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "z,v1,v2,v3,A0,A1,A2,A3");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 64);
}
