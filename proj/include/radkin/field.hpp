#pragma once

// Electromagnetic field models.
//
// Sign convention (fixed here and nowhere else): the covariant field tensor is
//
//     F_0i = E_i,    F_i0 = -E_i,    F_ij = -ε_ijk B_k,
//
// so that the equation of motion ẍ^a = -(q/m) F^a_b ẋ^b gives
// du/dλ = (q/m)(γE + u×B), and ∂_a F^{ab} = J^b reads ∇·E = ρ,
// ∂E/∂t = ∇×B - J. Heaviside-Lorentz units.

#include <array>
#include <memory>
#include <variant>
#include <vector>

#include "radkin/minkowski.hpp"

namespace radkin {

using Tensor4 = std::array<std::array<double, 4>, 4>;

struct FieldTensor {
    Tensor4 F{};                 // F_ab, both indices down
    std::array<Tensor4, 4> dF{};  // dF[d][a][b] = ∂_d F_ab
};

Tensor4 field_tensor_from_eb(const Vec3& E, const Vec3& B);
Vec3 electric_field(const Tensor4& F);
Vec3 magnetic_field(const Tensor4& F);

/// F^a_b = η^{aa} F_ab.
Tensor4 raise_first(const Tensor4& F);

/// w^a = F^a_b u^b.
FourVector contract_mixed(const Tensor4& F, const FourVector& u);

/// Switch-on envelope for the uniform models: zero for t < t_on, C² quintic
/// ramp of width `ramp` after t_on (ramp = 0 gives a hard step whose delta
/// derivative is not represented in dF).
struct TimeEnvelope {
    bool enabled = false;
    double t_on = 0.0;
    double ramp = 0.0;

    double value(double t) const;
    double rate(double t) const;
};

struct UniformElectric {
    Vec3 E;
    TimeEnvelope envelope{};
};

struct UniformMagnetic {
    Vec3 B;
    TimeEnvelope envelope{};
};

/// Linearly polarized vacuum plane wave E = E₀ ε̂ cos(k·x - |k|t + phase),
/// B = k̂ × E.
struct PlaneWave {
    double amplitude = 0.0;
    Vec3 wavevector;
    Vec3 polarization;  // unit, orthogonal to wavevector
    double phase = 0.0;
};

/// Immutable snapshot of the 1D electrostatic solver field. E_z lives on the
/// left cell faces z_min + i·dz (periodic); ∂_t E_z = -J_z per cell centre.
struct ElectrostaticSnapshot {
    double z_min = 0.0;
    double dz = 1.0;
    std::vector<double> e_face;
    std::vector<double> dedt_center;

    double length() const { return dz * static_cast<double>(e_face.size()); }
};

struct GridElectrostatic {
    std::shared_ptr<const ElectrostaticSnapshot> snapshot;
};

using FieldModel = std::variant<UniformElectric, UniformMagnetic, PlaneWave, GridElectrostatic>;

/// Evaluate F_ab and ∂_d F_ab at a spacetime point. Throws DomainError for
/// a grid model queried outside [z_min, z_min + L].
FieldTensor field_at(const FieldModel& model, const FourVector& x);

/// T_ab = F_ac F_b^c - ¼ η_ab F_cd F^cd (both indices down).
Tensor4 stress_energy(const Tensor4& F);

}  // namespace radkin
