#pragma once

// Minkowski algebra with signature (-,+,+,+), c = 1. Reduced coordinates
// (v, a) are the canonical representation of a point of the constrained
// phase space; the ambient 4-velocity and 4-acceleration are always derived
// through lift_velocity / lift_acceleration, so the constraints hold by
// construction.

#include <array>
#include <cmath>

namespace radkin {

struct Vec3 {
    std::array<double, 3> c{};

    constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) {
        for (int i = 0; i < 3; ++i) a[i] += b[i];
        return a;
    }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) {
        for (int i = 0; i < 3; ++i) a[i] -= b[i];
        return a;
    }
    friend constexpr Vec3 operator*(double s, Vec3 a) {
        for (int i = 0; i < 3; ++i) a[i] *= s;
        return a;
    }
    constexpr Vec3& operator+=(const Vec3& b) {
        for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] += b[i];
        return *this;
    }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

/// Contravariant components (index 0 = time).
struct FourVector {
    std::array<double, 4> c{};

    constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    constexpr Vec3 spatial() const { return {{c[1], c[2], c[3]}}; }

    friend constexpr FourVector operator+(FourVector a, const FourVector& b) {
        for (int i = 0; i < 4; ++i) a[i] += b[i];
        return a;
    }
    friend constexpr FourVector operator-(FourVector a, const FourVector& b) {
        for (int i = 0; i < 4; ++i) a[i] -= b[i];
        return a;
    }
    friend constexpr FourVector operator*(double s, FourVector a) {
        for (int i = 0; i < 4; ++i) a[i] *= s;
        return a;
    }
    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

/// η_aa, the only nonzero metric entries. Raising or lowering an index is a
/// sign flip on component 0.
constexpr double metric(int a) { return a == 0 ? -1.0 : 1.0; }

constexpr FourVector lower(FourVector u) {
    u[0] = -u[0];
    return u;
}

constexpr double minkowski_dot(const FourVector& u, const FourVector& w) {
    return -u[0] * w[0] + u[1] * w[1] + u[2] * w[2] + u[3] * w[3];
}

/// γ = √(1+|v|²) for the reduced velocity v (spatial part of the 4-velocity).
inline double lorentz_factor(const Vec3& v) { return std::sqrt(1.0 + dot(v, v)); }

inline FourVector lift_velocity(const Vec3& v) { return {{lorentz_factor(v), v[0], v[1], v[2]}}; }

inline FourVector lift_acceleration(const Vec3& v, const Vec3& a) {
    return {{dot(a, v) / lorentz_factor(v), a[0], a[1], a[2]}};
}

struct ReducedState {
    FourVector x;  // spacetime point
    Vec3 v;        // spatial 4-velocity components
    Vec3 a;        // spatial 4-acceleration components

    FourVector velocity() const { return lift_velocity(v); }
    FourVector acceleration() const { return lift_acceleration(v, a); }
};

struct ConstraintResidual {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

inline ConstraintResidual constraint_residuals(const FourVector& xdot, const FourVector& xddot) {
    return {0.5 * (minkowski_dot(xdot, xdot) + 1.0), minkowski_dot(xdot, xddot)};
}

/// Δ^a_b w^b = w^a + ẋ^a (ẋ_b w^b): projection orthogonal to a unit
/// timelike ẋ.
inline FourVector orthogonal_projection(const FourVector& xdot, const FourVector& w) {
    return w + minkowski_dot(xdot, w) * xdot;
}

struct LerayWeights {
    double fiber_weight;     // 1/(1+|v|²), density of ω on the (v, a) fibre
    double velocity_weight;  // 1/√(1+|v|²), density of the velocity-shell measure
};

inline LerayWeights leray_weights(const Vec3& v) {
    const double g2 = 1.0 + dot(v, v);
    return {1.0 / g2, 1.0 / std::sqrt(g2)};
}

}  // namespace radkin
