#pragma once

// Longitudinal dispersion relation of a radiating plasma about a
// homogeneous background ĝ(v) with no field:
//   D(ω, k) = 1 - (q²/m) ∫ (1 + v₁² + v₂²) ĝ / [Δ (ωγ - k v₃)²] d³v/γ,
//   Δ = 1 + iτ(ωγ - k v₃),
// and its cold limit iτω³ + ω² - ω_p² = 0.

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radkin {

using Complex = std::complex<double>;

enum class RootClass { physical, runaway, ambiguous };

std::string to_string(RootClass c);

struct DispersionRoot {
    Complex omega;
    double k = 0.0;
    double tau = 0.0;
    RootClass classification = RootClass::ambiguous;
    std::vector<std::pair<double, Complex>> continuation_path;  // (τ, ω)
    double residual = 0.0;
    bool near_singular = false;
};

/// Quadrature node of a background: ∫ F(v) ĝ d³v/γ ≈ Σ weight · F(v_node).
struct VelocityNode {
    double perp2 = 0.0;  // v₁² + v₂²
    double v3 = 0.0;
    double gamma = 1.0;
    double weight = 0.0;
};

/// A background distribution reduced to quadrature nodes. Weights are
/// normalized so that Σ weight·γ = n₀ exactly.
struct Background {
    double n0 = 1.0;
    std::vector<VelocityNode> nodes;

    /// ĝ = n₀ δ³(v).
    static Background cold(double n0);
    /// Isotropic Maxwellian ∝ exp(-|v|²/2v_th²) truncated at `cutoff` v_th,
    /// by Gauss-Legendre in cylindrical (v⊥, v₃) coordinates.
    static Background maxwellian(double n0, double v_th, int nodes = 64, double cutoff = 8.0);
    /// ĝ = δ(v₁)δ(v₂) h(v₃) on [lo, hi], Gauss-Legendre in v₃.
    static Background cold_transverse(const std::function<double(double)>& h, double n0, double lo, double hi,
                                      int nodes = 256);
    /// General ĝ(v₁, v₂, v₃) on the cube [-half_width, half_width]³ by
    /// tensor-product Gauss-Legendre with `nodes` points per axis.
    static Background tabulated(const std::function<double(double, double, double)>& g, double n0, double half_width,
                                int nodes = 64);
};

struct DispersionValue {
    Complex value;
    bool near_singular = false;
    double min_resonance = 0.0;  // min |ωγ - k v₃| over the nodes
};

struct DispersionOptions {
    double q_over_m = -1.0;
    double mass = 1.0;
    double eps_res = 1e-8;
    double tolerance = 1e-10;
    int max_iterations = 100;
    int halvings = 12;
    int substeps = 8;
    // Continuation stops above this τ (after at least one halving): below
    // ω_pτ ≈ 1e-6 the runaway root and the pole at i/τ agree to ~1e-12 and
    // double precision no longer separates them.
    double tau_floor = 1e-6;
};

/// Cubic roots (three for τ > 0, ±ω_p for τ = 0), sorted by real part then
/// imaginary part, each classified by τ-continuation of the cubic.
std::vector<DispersionRoot> cold_dispersion_roots(double omega_p, double tau);

/// |iτω³ + ω² - ω_p²| / max(ω_p², |ω|², τ|ω|³).
double cold_cubic_residual(Complex omega, double omega_p, double tau);

DispersionValue warm_dispersion_function(Complex omega, double k, const Background& bg, double tau,
                                         double q_over_m, double mass, double eps_res = 1e-8);

/// Default Newton seeds: ±ω_p - ½iω_p²τ, and i/τ when τ > 0.
std::vector<Complex> default_seeds(double omega_p, double tau);

/// Damped Newton from one seed. Throws ConvergenceFailure (message carries
/// the last iterate) after max_iterations.
Complex newton_root(const std::function<Complex(Complex)>& f, Complex seed, const DispersionOptions& opt);

/// Newton on D(·, k) from each seed, then classify_root. Throws
/// ConvergenceFailure for a seed that does not converge.
std::vector<DispersionRoot> find_roots(double k, const Background& bg, double tau, const std::vector<Complex>& seeds,
                                       const DispersionOptions& opt = {});

/// Follows the root along τ → τ/2 → … (opt.halvings halvings, each split
/// into opt.substeps geometric substeps, stopping at opt.tau_floor). Physical if |ω| stays within 10×
/// its initial value and settles; runaway if the log|ω| vs log τ slope is
/// within 20% of -1; otherwise ambiguous. τ = 0 is physical.
RootClass classify_root(DispersionRoot& root, const Background& bg, const DispersionOptions& opt = {});

/// Same continuation for an arbitrary relation f(ω, τ) = 0.
RootClass classify_by_continuation(const std::function<Complex(Complex, double)>& f, DispersionRoot& root,
                                   const DispersionOptions& opt);

/// Fitted slope of log|ω| against log τ along a continuation path.
double continuation_slope(const DispersionRoot& root);

/// Roots for every (k, τ) pair with default seeds.
std::vector<DispersionRoot> dispersion_scan(const std::vector<double>& ks, const std::vector<double>& taus,
                                            const Background& bg, const DispersionOptions& opt = {});

/// CSV with header k,tau,re_omega,im_omega,classification,residual.
void write_scan_csv(std::ostream& out, const std::vector<DispersionRoot>& roots);

}  // namespace radkin
