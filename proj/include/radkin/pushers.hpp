#pragma once

// Single-particle integrators for the radiating-electron equations of motion.
// All routines parametrize by proper time λ; τ and q/m are independent inputs.

#include <iosfwd>
#include <vector>

#include "radkin/field.hpp"
#include "radkin/minkowski.hpp"

namespace radkin {

enum class PushMethod { lorentz_dirac, landau_lifshitz, dirac_asymptotic, tau_series };

struct PusherConfig {
    PushMethod method = PushMethod::lorentz_dirac;
    double step = 1e-3;
    double tolerance = 1e-10;
    double horizon = 0.0;  // dirac-asymptotic only; <= 0 selects 10τ
    int max_picard_iters = 200;
    double picard_relaxation = 0.5;
    int laguerre_nodes = 32;
    int series_order = 1;  // tau-series only
};

struct TrajectorySample {
    double lambda = 0.0;
    ReducedState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double tau = 0.0;
    double q_over_m = 0.0;
};

struct LdDerivative {
    FourVector dx;
    Vec3 dv;
    Vec3 da;
};

/// Right-hand side of the Lorentz-Dirac flow on the constrained phase space:
/// dx = ẋ, dv = a, da = (ẍ·ẍ) v + τ⁻¹(a + (q/m) F^μ_a ẋ^a).
LdDerivative ld_rhs(const ReducedState& state, const FieldTensor& field, double tau, double q_over_m);

/// Spatial part of the Landau-Lifshitz acceleration
/// -(q/m)F^a_b ẋ^b - (q/m)τ[∂_d F^a_b ẋ^b - (q/m) Δ^a_b F^b_c F^c_d] ẋ^d.
Vec3 landau_lifshitz_acceleration(const Vec3& v, const FieldTensor& field, double tau, double q_over_m);

/// Lorentz-force acceleration A_(0)^μ = -(q/m) F^μ_a ẋ^a.
Vec3 lorentz_acceleration(const Vec3& v, const FieldTensor& field, double q_over_m);

/// First-order term of the τ-expansion of the physical acceleration, for an
/// external field (F_(n) = 0 for n >= 1), evaluated pointwise.
Vec3 series_first_order(const Vec3& v, const FieldTensor& field, double q_over_m);

/// Σ_{n<=order} τⁿ A_(n) at (x, v). Order 2 differentiates A_(1) by central
/// differences of the field model.
Vec3 series_acceleration(const FieldModel& model, const FourVector& x, const Vec3& v, double tau,
                         double q_over_m, int order);

Trajectory push_lorentz_dirac(const ReducedState& init, const FieldModel& model, double tau, double q_over_m,
                              const PusherConfig& cfg, double lambda_end);

Trajectory push_landau_lifshitz(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                                double q_over_m, const PusherConfig& cfg, double lambda_end);

Trajectory push_tau_series(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                           double q_over_m, const PusherConfig& cfg, double lambda_end);

/// Picard fixed point of Dirac's integro-differential form, with the
/// e^{-α} integral evaluated by Gauss-Laguerre quadrature on a cubic
/// interpolant of the force history. Throws ConvergenceFailure.
Trajectory push_dirac_asymptotic(const FourVector& x0, const Vec3& v0, const FieldModel& model, double tau,
                                 double q_over_m, const PusherConfig& cfg, double lambda_end);

/// Least-squares rate of ln √(ẍ·ẍ) over samples with lambda in [lo, hi].
double fitted_acceleration_rate(const Trajectory& traj, double lo, double hi);

/// CSV with columns lambda,x0,x1,x2,x3,v1,v2,v3,a1,a2,a3,phi1,phi2.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace radkin
