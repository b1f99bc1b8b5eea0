#pragma once

// Self-consistent 1D1V electrostatic solver for the reduced distribution
// g(z, v_z, t) with a radiation-reaction acceleration field. Time is lab
// time t = x⁰; the transverse velocity is cold (v¹ = v² = 0). Units are
// normalized to the plasma frequency, so lengths are in c/ω_p.
//
// Grid conventions: g lives at cell centres (z_i + Δz/2, v_j); E_z lives on
// the left face z_i of each z cell. Ampère's law is applied with the same
// face fluxes that move particles between cells, so the discrete Gauss law
// (E_{i+1} - E_i)/Δz = q(n_i - n₀) is preserved to roundoff.

#include <array>
#include <vector>

#include "radkin/field.hpp"
#include "radkin/kernels.hpp"
#include "radkin/minkowski.hpp"
#include "radkin/submanifold.hpp"

namespace radkin {

struct DistG {
    PhaseGrid grid;              // v¹ and v² degenerate
    std::vector<double> values;  // values[iz * nv + iv]

    kernels::Layout layout() const;
    /// ∫ g dz dv.
    double total() const;
};

struct PlasmaParams {
    double charge = -1.0;
    double mass = 1.0;
    double n0 = 1.0;
    double tau = 0.0;
    int order = 1;  // truncation order N of the acceleration series
    AdvectionScheme scheme = AdvectionScheme::LaxWendroffPositive;
    bool parallel = true;

    double q_over_m() const { return charge / mass; }
    double omega_p() const;
};

struct PlasmaState {
    DistG g;
    std::vector<double> e_face;
    std::vector<double> dedt;  // ∂_t E_z at cell centres used by the last reconstruction
    AccelField accel;           // last reconstructed A
    double t = 0.0;
    PlasmaParams params;
    double boundary_loss = 0.0;  // cumulative number lost through ±v_max

    // Previous A_(1) for the ∂_t A_(1) term of the order-2 closure.
    VectorGrid prev_a1;
    double prev_a1_time = 0.0;
};

struct QuietStart {
    int nz = 256;
    int nv = 256;
    double length = 0.0;  // <= 0 selects 2π/k with k = 0.1
    double v_max = 0.5;
    double v_width = 0.0;  // Gaussian width; <= 0 selects 3Δv
    double amplitude = 1e-3;  // relative density perturbation n₀ α cos(kz)
    int mode = 1;             // k = 2π·mode/length
    double drift = 0.0;
};

/// Deterministic initial state with E_z from the discrete Gauss law (zero
/// mean). Throws DomainError if the velocity box does not contain the
/// distribution (mass beyond 0.9 v_max above 1e-10 of the total).
PlasmaState quiet_start(const QuietStart& cfg, const PlasmaParams& params);

/// Wraps an arbitrary g; E_z from the discrete Gauss law with zero mean.
PlasmaState make_state(DistG g, const PlasmaParams& params);

struct CurrentMoment {
    std::vector<double> j0;  // q ∫ g dv per cell
    std::vector<double> j3;  // q ∫ g v/γ dv per cell
};

CurrentMoment current_moment(const DistG& g, double charge);

/// S^ab = m ∫ g ẋ^a ẋ^b dv/γ per cell, with ẋ = (γ, 0, 0, v).
std::vector<Tensor4> stress_moment(const DistG& g, double mass);

/// Field grid for the current E_z, with ∂_t E_z = -J³ from Ampère's law
/// (the neutralizing background is at rest).
FieldGrid field_grid(const PlasmaState& state);

/// Rebuilds state.accel (and state.dedt) from the current g and E_z.
void reconstruct_accel(PlasmaState& state);

/// Lab-time acceleration A³/γ at every node of g, from state.accel.
std::vector<double> lab_acceleration(const PlasmaState& state);

/// dg/dt of the generalized Vlasov equation in flux form (central fluxes),
/// using state.accel as it stands.
std::vector<double> vlasov_rhs(const PlasmaState& state);

/// Explicit Ampère update E_z - dt (J³ + J³_ext) with J³ interpolated to the faces.
std::vector<double> maxwell_step(const PlasmaState& state, double dt);

/// Largest dt accepted by step(): 0.5 min(Δz γ/|v|, Δv γ/|A|) over the grid.
double stable_dt(const PlasmaState& state);

/// One Strang-split step (z half, v full, z half). Throws CflViolation with
/// a suggested dt when dt exceeds stable_dt after reconstruction.
PlasmaState step(const PlasmaState& state, double dt);

/// In-place variant of step().
void advance(PlasmaState& state, double dt);

struct Diagnostics {
    double t = 0.0;
    double field_energy = 0.0;
    double kinetic_energy = 0.0;
    double n_tot = 0.0;
    double j1_mode_amplitude = 0.0;
    double entropy = 0.0;
    double gauss_residual = 0.0;  // max |ΔE/Δz - ρ|
};

Diagnostics diagnostics(const PlasmaState& state);

/// Phase-space divergence of the Lorentz-Dirac flow with respect to the
/// Leray measure ω, by central differences of step h in all ten reduced
/// coordinates (x, v, a). Equals 3/τ exactly.
double leray_divergence(const ReducedState& point, const FieldModel& model, double tau, double q_over_m, double h);

}  // namespace radkin
