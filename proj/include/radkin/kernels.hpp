#pragma once

// Flux-form advection sweeps on a 1D1V grid stored row-major as
// g[iz * nv + iv]. Each sweep exists twice: a serial reference and an
// OpenMP version. Both produce bit-identical results because every
// reduction is carried out in a fixed order.

#include <cstddef>
#include <span>
#include <vector>

namespace radkin {

enum class AdvectionScheme { LaxWendroffPositive, VanLeer };

namespace kernels {

struct Layout {
    int nz = 0;
    int nv = 0;
    double dz = 0.0;
    double dv = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(nz) * static_cast<std::size_t>(nv); }
};

/// Result of a z sweep: per-face number flux integrated over v, averaged
/// over the step (face i is the left face of cell i, periodic).
struct ZSweep {
    std::vector<double> face_flux;
};

/// Result of a v sweep: particle number that left through ±v_max.
struct VSweep {
    double boundary_loss = 0.0;
};

/// Numerical flux at the face between cells with values gl (upwind side for
/// a > 0) and gr. `a` is the face speed and `c` = a·dt/h.
inline double lax_wendroff_flux(double a, double c, double gl, double gr) {
    return a * (0.5 * (gl + gr) - 0.5 * c * (gr - gl));
}

inline double van_leer_slope(double dl, double dr) {
    const double p = dl * dr;
    return p > 0.0 ? 2.0 * p / (dl + dr) : 0.0;
}

namespace serial {
/// g ← g - dt ∂_z(s(v) g) with periodic z; speed[iv] = v/γ.
ZSweep advect_z(std::span<double> g, const Layout& lay, std::span<const double> speed, double dt,
                AdvectionScheme scheme);
/// g ← g - dt ∂_v(a g); accel[iz * nv + iv] = lab-time acceleration at the node.
VSweep advect_v(std::span<double> g, const Layout& lay, std::span<const double> accel, double dt,
                AdvectionScheme scheme);
}  // namespace serial

namespace omp {
ZSweep advect_z(std::span<double> g, const Layout& lay, std::span<const double> speed, double dt,
                AdvectionScheme scheme);
VSweep advect_v(std::span<double> g, const Layout& lay, std::span<const double> accel, double dt,
                AdvectionScheme scheme);
}  // namespace omp

}  // namespace kernels
}  // namespace radkin
