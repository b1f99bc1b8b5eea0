#include "radkin/field.hpp"

#include <cmath>

#include "radkin/errors.hpp"

namespace radkin {

namespace {

constexpr int levi_civita(int i, int j, int k) {
    return (i - j) * (j - k) * (k - i) / 2;
}

Tensor4 scaled(const Tensor4& F, double s) {
    Tensor4 out = F;
    for (auto& row : out)
        for (auto& x : row) x *= s;
    return out;
}

}  // namespace

Tensor4 field_tensor_from_eb(const Vec3& E, const Vec3& B) {
    Tensor4 F{};
    for (int i = 0; i < 3; ++i) {
        F[0][i + 1] = E[i];
        F[i + 1][0] = -E[i];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += levi_civita(i, j, k) * B[k];
            F[i + 1][j + 1] = -s;
        }
    return F;
}

Vec3 electric_field(const Tensor4& F) { return {{F[0][1], F[0][2], F[0][3]}}; }

Vec3 magnetic_field(const Tensor4& F) {
    // F_23 = -B_1, F_31 = -B_2, F_12 = -B_3
    return {{-F[2][3], -F[3][1], -F[1][2]}};
}

Tensor4 raise_first(const Tensor4& F) {
    Tensor4 out = F;
    for (int b = 0; b < 4; ++b) out[0][b] = -F[0][b];
    return out;
}

FourVector contract_mixed(const Tensor4& F, const FourVector& u) {
    FourVector w;
    for (int a = 0; a < 4; ++a) {
        double s = 0.0;
        for (int b = 0; b < 4; ++b) s += F[a][b] * u[b];
        w[a] = metric(a) * s;
    }
    return w;
}

double TimeEnvelope::value(double t) const {
    if (!enabled) return 1.0;
    if (t < t_on) return 0.0;
    if (ramp <= 0.0 || t >= t_on + ramp) return 1.0;
    const double s = (t - t_on) / ramp;
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double TimeEnvelope::rate(double t) const {
    if (!enabled || ramp <= 0.0 || t < t_on || t >= t_on + ramp) return 0.0;
    const double s = (t - t_on) / ramp;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s) / ramp;
}

namespace {

FieldTensor uniform(const Tensor4& F0, const TimeEnvelope& env, double t) {
    FieldTensor out;
    out.F = scaled(F0, env.value(t));
    out.dF[0] = scaled(F0, env.rate(t));
    return out;
}

FieldTensor evaluate(const UniformElectric& m, const FourVector& x) {
    return uniform(field_tensor_from_eb(m.E, Vec3{}), m.envelope, x[0]);
}

FieldTensor evaluate(const UniformMagnetic& m, const FourVector& x) {
    return uniform(field_tensor_from_eb(Vec3{}, m.B), m.envelope, x[0]);
}

FieldTensor evaluate(const PlaneWave& m, const FourVector& x) {
    const double k = norm(m.wavevector);
    const Vec3 khat = k > 0.0 ? (1.0 / k) * m.wavevector : Vec3{};
    const Vec3 E0 = m.amplitude * m.polarization;
    const Tensor4 Fhat = field_tensor_from_eb(E0, cross(khat, E0));
    const double phi = dot(m.wavevector, x.spatial()) - k * x[0] + m.phase;
    // ∂_d φ with lower index d: (-|k|, k_x, k_y, k_z)
    const std::array<double, 4> dphi{-k, m.wavevector[0], m.wavevector[1], m.wavevector[2]};

    FieldTensor out;
    out.F = scaled(Fhat, std::cos(phi));
    for (int d = 0; d < 4; ++d) out.dF[d] = scaled(Fhat, -std::sin(phi) * dphi[static_cast<std::size_t>(d)]);
    return out;
}

FieldTensor evaluate(const GridElectrostatic& m, const FourVector& x) {
    const auto& s = *m.snapshot;
    const auto n = s.e_face.size();
    const double z = x[3];
    if (n == 0 || !(z >= s.z_min && z <= s.z_min + s.length()))
        throw DomainError("grid field queried outside its z domain");

    // Cell containing z, and linear interpolation between its two faces.
    const double xi = (z - s.z_min) / s.dz;
    auto cell = static_cast<std::size_t>(xi);
    if (cell >= n) cell = n - 1;
    const double w = xi - static_cast<double>(cell);
    const double e_left = s.e_face[cell];
    const double e_right = s.e_face[(cell + 1) % n];
    const double ez = (1.0 - w) * e_left + w * e_right;
    const double dedz = (e_right - e_left) / s.dz;
    const double dedt = s.dedt_center.empty() ? 0.0 : s.dedt_center[cell];

    const Vec3 zhat{{0.0, 0.0, 1.0}};
    const Tensor4 unit = field_tensor_from_eb(zhat, Vec3{});
    FieldTensor out;
    out.F = scaled(unit, ez);
    out.dF[0] = scaled(unit, dedt);
    out.dF[3] = scaled(unit, dedz);
    return out;
}

}  // namespace

FieldTensor field_at(const FieldModel& model, const FourVector& x) {
    return std::visit([&](const auto& m) { return evaluate(m, x); }, model);
}

Tensor4 stress_energy(const Tensor4& F) {
    // F_b^c = F_bd η^{dc}: flip sign of column 0.
    double invariant = 0.0;  // F_cd F^cd
    for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) invariant += metric(c) * metric(d) * F[c][d] * F[c][d];

    Tensor4 T{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double s = 0.0;
            for (int c = 0; c < 4; ++c) s += F[a][c] * F[b][c] * metric(c);
            T[a][b] = s - 0.25 * (a == b ? metric(a) : 0.0) * invariant;
        }
    return T;
}

}  // namespace radkin
