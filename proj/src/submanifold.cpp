#include "radkin/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "radkin/pushers.hpp"

namespace radkin {

PhaseGrid PhaseGrid::one_d_one_v(int nz, double length, int nv, double v_max) {
    PhaseGrid g;
    g.z = {nz, 0.0, length};
    g.v = {Axis::degenerate(), Axis::degenerate(), Axis::centered(nv, v_max)};
    return g;
}

void PhaseGrid::validate() const {
    auto check = [](const Axis& a, const char* name, bool allow_stencil) {
        if (!(a.hi > a.lo)) throw std::invalid_argument(std::string("axis ") + name + ": spacing must be positive");
        const bool ok = a.n == 1 || a.n >= 8 || (allow_stencil && a.n == 3);
        if (!ok) throw std::invalid_argument(std::string("axis ") + name + ": need 1 or >= 8 nodes");
    };
    check(z, "z", false);
    check(v[0], "v1", true);
    check(v[1], "v2", true);
    check(v[2], "v3", false);
}

FieldGrid FieldGrid::sample(const FieldModel& model, const PhaseGrid& grid, double t) {
    FieldGrid out;
    out.at_z.resize(static_cast<std::size_t>(grid.z.n));
    for (int iz = 0; iz < grid.z.n; ++iz)
        out.at_z[static_cast<std::size_t>(iz)] = field_at(model, {{t, 0.0, 0.0, grid.z.node(iz)}});
    return out;
}

FieldGrid FieldGrid::electrostatic(const std::vector<double>& e_face, const std::vector<double>& dedt_center,
                                   double dz) {
    const std::size_t n = e_face.size();
    const Tensor4 unit = field_tensor_from_eb({{0.0, 0.0, 1.0}}, Vec3{});
    FieldGrid out;
    out.at_z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = e_face[i];
        const double right = e_face[(i + 1) % n];
        FieldTensor& f = out.at_z[i];
        const double ec = 0.5 * (left + right);
        const double dedz = (right - left) / dz;
        const double dedt = dedt_center.empty() ? 0.0 : dedt_center[i];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                f.F[a][b] = ec * unit[a][b];
                f.dF[0][a][b] = dedt * unit[a][b];
                f.dF[3][a][b] = dedz * unit[a][b];
            }
    }
    return out;
}

VectorGrid AccelField::total() const {
    VectorGrid out(grid.size());
    double scale = 1.0;
    for (const auto& order : orders) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * order[i];
        scale *= tau;
    }
    return out;
}

namespace {

struct NodeIndex {
    int iz, i1, i2, i3;
};

// ∂/∂v along axis k: central inside, second-order one-sided at the edges.
Vec3 v_derivative(const VectorGrid& g, const PhaseGrid& grid, int k, const NodeIndex& p) {
    const Axis& ax = grid.v[static_cast<std::size_t>(k)];
    if (ax.n == 1) return {};
    const double h = ax.spacing();
    const int i = k == 0 ? p.i1 : (k == 1 ? p.i2 : p.i3);
    auto at = [&](int j) -> const Vec3& {
        NodeIndex q = p;
        (k == 0 ? q.i1 : (k == 1 ? q.i2 : q.i3)) = j;
        return g[grid.index(q.iz, q.i1, q.i2, q.i3)];
    };
    if (ax.n == 2) return (1.0 / h) * (at(1) - at(0));
    if (i == 0) return (1.0 / (2.0 * h)) * ((-3.0) * at(0) + 4.0 * at(1) - at(2));
    if (i == ax.n - 1) return (1.0 / (2.0 * h)) * (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2));
    return (1.0 / (2.0 * h)) * (at(i + 1) - at(i - 1));
}

// Periodic central difference in z.
Vec3 z_derivative(const VectorGrid& g, const PhaseGrid& grid, const NodeIndex& p) {
    const int n = grid.z.n;
    if (n < 3) return {};
    const int up = (p.iz + 1) % n;
    const int dn = (p.iz + n - 1) % n;
    return (1.0 / (2.0 * grid.z.spacing())) *
           (g[grid.index(up, p.i1, p.i2, p.i3)] - g[grid.index(dn, p.i1, p.i2, p.i3)]);
}

template <class Body>
void for_each_node(const PhaseGrid& grid, Body&& body) {
    const int nz = grid.z.n;
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz)
        for (int i1 = 0; i1 < grid.v[0].n; ++i1)
            for (int i2 = 0; i2 < grid.v[1].n; ++i2)
                for (int i3 = 0; i3 < grid.v[2].n; ++i3) body(NodeIndex{iz, i1, i2, i3});
}

void check_sizes(const std::vector<VectorGrid>& grids, const PhaseGrid& grid, const FieldGrid& field) {
    for (const auto& g : grids)
        if (g.size() != grid.size()) throw std::invalid_argument("acceleration grid does not match phase grid");
    if (field.at_z.size() != static_cast<std::size_t>(grid.z.n))
        throw std::invalid_argument("field grid does not match the z axis");
}

}  // namespace

VectorGrid a0_field(const FieldGrid& field, const PhaseGrid& grid, double q_over_m) {
    check_sizes({}, grid, field);
    VectorGrid out(grid.size());
    for_each_node(grid, [&](const NodeIndex& p) {
        out[grid.index(p.iz, p.i1, p.i2, p.i3)] = lorentz_acceleration(
            grid.velocity(p.i1, p.i2, p.i3), field.at_z[static_cast<std::size_t>(p.iz)], q_over_m);
    });
    return out;
}

VectorGrid tau_recursion_step(const std::vector<VectorGrid>& lower, const std::vector<VectorGrid>& time_derivatives,
                              const FieldGrid& field, const PhaseGrid& grid, double q_over_m) {
    if (lower.empty()) throw std::invalid_argument("tau_recursion_step needs A_(0)");
    check_sizes(lower, grid, field);
    const std::size_t n = lower.size() - 1;
    const VectorGrid* dAn_dt =
        (n >= 1 && time_derivatives.size() > n && !time_derivatives[n].empty()) ? &time_derivatives[n] : nullptr;

    VectorGrid out(grid.size());
    for_each_node(grid, [&](const NodeIndex& p) {
        const std::size_t idx = grid.index(p.iz, p.i1, p.i2, p.i3);
        const Vec3 v = grid.velocity(p.i1, p.i2, p.i3);
        const FourVector u = lift_velocity(v);
        const FieldTensor& f = field.at_z[static_cast<std::size_t>(p.iz)];

        Vec3 result;
        // ẋ^a ∂_a A_(n)
        if (n == 0) {
            for (int mu = 1; mu < 4; ++mu) {
                double s = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) s += u[a] * u[b] * f.dF[a][mu][b];
                result[mu - 1] = -q_over_m * s;
            }
        } else {
            result = u[3] * z_derivative(lower[n], grid, p);
            if (dAn_dt) result += u[0] * (*dAn_dt)[idx];
        }
        // Σ_j A^ν_(n-j) ∂_ν A_(j) - v Σ_j A_(n-j)·A_(j)
        double contraction = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const Vec3& outer = lower[n - j][idx];
            for (int k = 0; k < 3; ++k) {
                if (outer[k] == 0.0) continue;
                result += outer[k] * v_derivative(lower[j], grid, k, p);
            }
            contraction += minkowski_dot(lift_acceleration(v, outer), lift_acceleration(v, lower[j][idx]));
        }
        out[idx] = result - contraction * v;
    });
    return out;
}

AccelField build_accel_field(const FieldGrid& field, const PhaseGrid& grid, double q_over_m, double tau, int order,
                             const std::vector<VectorGrid>& time_derivatives) {
    if (order < 0) throw std::invalid_argument("truncation order must be non-negative");
    AccelField accel;
    accel.grid = grid;
    accel.tau = tau;
    accel.orders.push_back(a0_field(field, grid, q_over_m));
    for (int k = 0; k < order; ++k)
        accel.orders.push_back(tau_recursion_step(accel.orders, time_derivatives, field, grid, q_over_m));
    return accel;
}

VectorGrid accel_pde_residual(const AccelField& accel, const VectorGrid& dA_dt, const FieldGrid& field,
                              double q_over_m) {
    if (!(accel.tau > 0.0)) throw std::invalid_argument("residual needs tau > 0");
    const PhaseGrid& grid = accel.grid;
    const VectorGrid A = accel.total();
    check_sizes({A}, grid, field);
    if (!dA_dt.empty() && dA_dt.size() != grid.size()) throw std::invalid_argument("dA_dt does not match grid");

    VectorGrid out(grid.size());
    for_each_node(grid, [&](const NodeIndex& p) {
        const std::size_t idx = grid.index(p.iz, p.i1, p.i2, p.i3);
        const Vec3 v = grid.velocity(p.i1, p.i2, p.i3);
        const FourVector u = lift_velocity(v);
        const Vec3& a = A[idx];
        Vec3 r = u[3] * z_derivative(A, grid, p);
        if (!dA_dt.empty()) r += u[0] * dA_dt[idx];
        for (int k = 0; k < 3; ++k)
            if (a[k] != 0.0) r += a[k] * v_derivative(A, grid, k, p);
        const FourVector w = lift_acceleration(v, a);
        r = r - minkowski_dot(w, w) * v;
        const Vec3 lorentz = lorentz_acceleration(v, field.at_z[static_cast<std::size_t>(p.iz)], q_over_m);
        // A + (q/m) F^μ_a ẋ^a = A - A_(0)
        out[idx] = r - (1.0 / accel.tau) * (a - lorentz);
    });
    return out;
}

double max_norm(const VectorGrid& g) {
    double m = 0.0;
    for (const auto& x : g)
        for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(x[k]));
    return m;
}

void write_accel_csv(std::ostream& out, const AccelField& accel) {
    const PhaseGrid& grid = accel.grid;
    const VectorGrid A = accel.total();
    out << "z,v1,v2,v3,A0,A1,A2,A3\n";
    char buf[320];
    for (int iz = 0; iz < grid.z.n; ++iz)
        for (int i1 = 0; i1 < grid.v[0].n; ++i1)
            for (int i2 = 0; i2 < grid.v[1].n; ++i2)
                for (int i3 = 0; i3 < grid.v[2].n; ++i3) {
                    const Vec3 v = grid.velocity(i1, i2, i3);
                    const Vec3& a = A[grid.index(iz, i1, i2, i3)];
                    const FourVector w = lift_acceleration(v, a);
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                  grid.z.node(iz), v[0], v[1], v[2], w[0], a[0], a[1], a[2]);
                    out << buf;
                }
}

}  // namespace radkin
