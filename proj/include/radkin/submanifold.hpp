#pragma once

// The physical acceleration field A^μ(z, v) on a phase-space grid and its
// τ-expansion. The spatial grid is the periodic z axis; each velocity axis is
// cell-centred and an axis with a single node is degenerate (fixed at its
// centre, derivatives along it are taken as zero).

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "radkin/field.hpp"
#include "radkin/minkowski.hpp"

namespace radkin {

struct Axis {
    int n = 1;
    double lo = 0.0;  // left edge of the first cell
    double hi = 0.0;  // right edge of the last cell

    double spacing() const { return (hi - lo) / n; }
    double node(int i) const { return lo + (i + 0.5) * spacing(); }

    static Axis centered(int n, double half_width) { return {n, -half_width, half_width}; }
    /// Single-node axis at v = 0.
    static Axis degenerate() { return {1, -0.5, 0.5}; }
    /// Three nodes at -h, 0, h: the stencil used to take transverse
    /// derivatives at v⊥ = 0 of a cold-transverse distribution.
    static Axis transverse_stencil(double h) { return {3, -1.5 * h, 1.5 * h}; }
};

struct PhaseGrid {
    Axis z;                  // periodic
    std::array<Axis, 3> v;  // v¹, v², v³

    static PhaseGrid one_d_one_v(int nz, double length, int nv, double v_max);

    std::size_t size() const {
        return static_cast<std::size_t>(z.n) * static_cast<std::size_t>(v[0].n * v[1].n * v[2].n);
    }
    std::size_t velocity_size() const { return static_cast<std::size_t>(v[0].n * v[1].n * v[2].n); }
    std::size_t index(int iz, int i1, int i2, int i3) const {
        return ((static_cast<std::size_t>(iz) * v[0].n + i1) * v[1].n + i2) * static_cast<std::size_t>(v[2].n) + i3;
    }
    Vec3 velocity(int i1, int i2, int i3) const { return {{v[0].node(i1), v[1].node(i2), v[2].node(i3)}}; }

    /// Throws std::invalid_argument unless every non-degenerate axis has at
    /// least 8 nodes (transverse stencils of 3 nodes are also accepted).
    void validate() const;
};

using VectorGrid = std::vector<Vec3>;

/// F_ab and ∂_d F_ab at each z node; fields depend on (t, z) only.
struct FieldGrid {
    std::vector<FieldTensor> at_z;

    static FieldGrid sample(const FieldModel& model, const PhaseGrid& grid, double t);
    /// E_z on faces (left face of each cell), ∂_t E_z per cell centre.
    static FieldGrid electrostatic(const std::vector<double>& e_face, const std::vector<double>& dedt_center,
                                   double dz);
};

struct AccelField {
    PhaseGrid grid;
    std::vector<VectorGrid> orders;  // A_(0) ... A_(N); A⁰ is never stored
    double tau = 0.0;

    int truncation() const { return static_cast<int>(orders.size()) - 1; }
    /// Σ τⁿ A_(n).
    VectorGrid total() const;
};

VectorGrid a0_field(const FieldGrid& field, const PhaseGrid& grid, double q_over_m);

/// A_(n+1) from A_(0..n). `time_derivatives[j]`, when present, supplies
/// ∂A_(j)/∂t for j >= 1 (the j = 0 term comes from ∂_t F). Missing entries
/// are taken as zero. F_(n+1) is zero (external or quasi-static field).
VectorGrid tau_recursion_step(const std::vector<VectorGrid>& lower, const std::vector<VectorGrid>& time_derivatives,
                              const FieldGrid& field, const PhaseGrid& grid, double q_over_m);

/// Orders 0..order in one go.
AccelField build_accel_field(const FieldGrid& field, const PhaseGrid& grid, double q_over_m, double tau, int order,
                             const std::vector<VectorGrid>& time_derivatives = {});

/// Residual of ẋ^a ∂_a A + A^ν ∂_ν A - (A·A) v - τ⁻¹(A + (q/m) F ẋ) for the
/// truncated series, with ∂_t A supplied by `dA_dt` (empty = static).
VectorGrid accel_pde_residual(const AccelField& accel, const VectorGrid& dA_dt, const FieldGrid& field,
                              double q_over_m);

/// Max-norm over the grid.
double max_norm(const VectorGrid& g);

/// CSV snapshot: z,v1,v2,v3,A0,A1,A2,A3 for the summed field.
void write_accel_csv(std::ostream& out, const AccelField& accel);

}  // namespace radkin
