#include <doctest.h>

#include <cmath>
#include <random>

#include "radkin/minkowski.hpp"

using namespace radkin;

namespace {

void check_four(const FourVector& got, const FourVector& want, double tol = 1e-14) {
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {{u(rng), u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("minkowski_dot examples") {
    CHECK(minkowski_dot({{1, 0, 0, 0}}, {{1, 0, 0, 0}}) == -1.0);
    CHECK(minkowski_dot({{1, 1, 0, 0}}, {{1, 1, 0, 0}}) == 0.0);
    const FourVector boost{{2, 0, 0, std::sqrt(3.0)}};
    CHECK(minkowski_dot(boost, boost) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("lift_velocity examples") {
    check_four(lift_velocity({{0, 0, 0}}), {{1, 0, 0, 0}});
    check_four(lift_velocity({{0, 0, std::sqrt(3.0)}}), {{2, 0, 0, std::sqrt(3.0)}});
    check_four(lift_velocity({{3, 4, 0}}), {{std::sqrt(26.0), 3, 4, 0}});
}

TEST_CASE("lift_acceleration examples") {
    check_four(lift_acceleration({{0, 0, 0}}, {{0, 0, 1}}), {{0, 0, 0, 1}});
    check_four(lift_acceleration({{0, 0, std::sqrt(3.0)}}, {{0, 0, 1}}), {{std::sqrt(3.0) / 2, 0, 0, 1}});
    check_four(lift_acceleration({{0, 0, std::sqrt(3.0)}}, {{1, 0, 0}}), {{0, 1, 0, 0}});
}

TEST_CASE("constraint_residuals examples") {
    auto r = constraint_residuals({{1, 0, 0, 0}}, {{0, 0, 0, 1}});
    CHECK(r.phi1 == 0.0);
    CHECK(r.phi2 == 0.0);
    r = constraint_residuals({{1, 0, 0, 0}}, {{1, 0, 0, 0}});
    CHECK(r.phi1 == 0.0);
    CHECK(r.phi2 == -1.0);
    r = constraint_residuals({{2, 0, 0, 0}}, {});
    CHECK(r.phi1 == -1.5);  // ½(-4 + 1)
    CHECK(r.phi2 == 0.0);
}

TEST_CASE("orthogonal_projection examples") {
    check_four(orthogonal_projection({{1, 0, 0, 0}}, {{5, 0, 0, 2}}), {{0, 0, 0, 2}});
    check_four(orthogonal_projection({{1, 0, 0, 0}}, {{0, 1, 0, 0}}), {{0, 1, 0, 0}});
    const FourVector u{{2, 0, 0, std::sqrt(3.0)}};
    const FourVector p = orthogonal_projection(u, u);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(p[i]) < 1e-14);
}

TEST_CASE("lifted pairs satisfy both constraints for random states") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 2000; ++n) {
        const Vec3 v = random_vec(rng, 20.0);
        const Vec3 a = random_vec(rng, 50.0);
        const FourVector u = lift_velocity(v);
        const FourVector w = lift_acceleration(v, a);
        const auto r = constraint_residuals(u, w);
        const double scale = u[0] * u[0];
        CHECK(std::abs(r.phi1) <= 1e-14 * scale);
        CHECK(std::abs(r.phi2) <= 1e-14 * u[0] * (std::abs(w[0]) + norm(a)));
    }
}

TEST_CASE("projection is idempotent on the velocity shell") {
    std::mt19937_64 rng(12);
    for (int n = 0; n < 500; ++n) {
        const FourVector u = lift_velocity(random_vec(rng, 5.0));
        FourVector w;
        for (int i = 0; i < 4; ++i) w[i] = std::uniform_real_distribution<double>(-3, 3)(rng);
        const FourVector once = orthogonal_projection(u, w);
        const FourVector twice = orthogonal_projection(u, once);
        for (int i = 0; i < 4; ++i) CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-11).scale(u[0] * u[0]));
        CHECK(std::abs(minkowski_dot(u, once)) < 1e-11 * u[0] * u[0] * u[0]);
    }
}

TEST_CASE("Leray weights: fibre weight is the square of the velocity weight") {
    std::mt19937_64 rng(13);
    for (int n = 0; n < 500; ++n) {
        const auto w = leray_weights(random_vec(rng, 10.0));
        CHECK(w.fiber_weight == doctest::Approx(w.velocity_weight * w.velocity_weight).epsilon(1e-15));
    }
}
