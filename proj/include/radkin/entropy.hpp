#pragma once

// Electron entropy S = ∫ -g ln g and its production rate. g is measured in
// units of one particle per unit cell of the normalized phase space; a
// different reference density only shifts S by a constant times N_tot.

#include <vector>

#include "radkin/field.hpp"
#include "radkin/minkowski.hpp"
#include "radkin/submanifold.hpp"
#include "radkin/vlasov.hpp"

namespace radkin {

inline constexpr double kEntropyFloor = 1e-300;

struct EntropyReport {
    double S_total = 0.0;
    double dS_dt_exact = 0.0;
    double dS_dt_first_order = 0.0;
    double self_term = 0.0;   // -(1/m) ∫ J_a J^a
    double ext_term = 0.0;    // -(1/m) ∫ J_a J^a_ext
    double field_term = 0.0;  // -(4q²/m³) ∫ T_ab S^ab
};

/// ∫ -g ln g dz dv; values below kEntropyFloor count as zero.
double entropy_total(const DistG& g);

/// Divergence ∂_μ(A^μ/γ) at v¹ = v² = 0 for each (z, v³) node of g. The
/// accel grid shares z and v³ with g; its transverse axes are either
/// degenerate (no transverse contribution) or 3-node stencils centred on 0.
std::vector<double> accel_divergence(const DistG& g, const AccelField& accel);

/// ∫ g ∂_μ(A^μ/γ) dz dv.
double entropy_rate_exact(const DistG& g, const AccelField& accel);

/// First-order closed form from moments given per z cell of width dz.
/// J and S are contravariant, F is F_ab.
EntropyReport entropy_rate_from_moments(const std::vector<FourVector>& J, const std::vector<Tensor4>& S,
                                        const std::vector<Tensor4>& F, const FourVector& j_ext, double charge,
                                        double mass, double dz);

/// First-order closed form for a 1D1V distribution and per-cell fields F_ab.
EntropyReport entropy_rate_first_order(const DistG& g0, const std::vector<Tensor4>& F0, const FourVector& j_ext,
                                       double charge, double mass);

/// AccelField for the electrostatic state on a grid that adds 3-node
/// transverse stencils of spacing h, so that accel_divergence sees the
/// transverse derivatives.
AccelField transverse_accel(const PlasmaState& state, int order, double h = 1e-4);

}  // namespace radkin
