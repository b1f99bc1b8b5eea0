#include "radkin/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace radkin {

double entropy_total(const DistG& g) {
    const kernels::Layout lay = g.layout();
    double s = 0.0;
    for (double x : g.values)
        if (x >= kEntropyFloor) s -= x * std::log(x);
    return s * lay.dz * lay.dv;
}

std::vector<double> accel_divergence(const DistG& g, const AccelField& accel) {
    const PhaseGrid& ag = accel.grid;
    const PhaseGrid& gg = g.grid;
    if (ag.z.n != gg.z.n || ag.v[2].n != gg.v[2].n || ag.v[2].lo != gg.v[2].lo || ag.v[2].hi != gg.v[2].hi)
        throw std::invalid_argument("acceleration grid does not share z and v3 with the distribution");
    for (int k = 0; k < 2; ++k)
        if (ag.v[static_cast<std::size_t>(k)].n != 1 && ag.v[static_cast<std::size_t>(k)].n != 3)
            throw std::invalid_argument("transverse acceleration axes must have 1 or 3 nodes");

    const VectorGrid A = accel.total();
    const int n1 = ag.v[0].n;
    const int n2 = ag.v[1].n;
    const int c1 = n1 / 2;
    const int c2 = n2 / 2;
    const int nz = ag.z.n;
    const int nv = ag.v[2].n;
    const double dv = ag.v[2].spacing();

    // A^k/γ at a node
    auto ratio = [&](int iz, int i1, int i2, int i3, int k) {
        return A[ag.index(iz, i1, i2, i3)][k] / lorentz_factor(ag.velocity(i1, i2, i3));
    };

    std::vector<double> div(static_cast<std::size_t>(nz) * static_cast<std::size_t>(nv), 0.0);
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz)
        for (int j = 0; j < nv; ++j) {
            double d = 0.0;
            if (n1 == 3) d += (ratio(iz, 2, c2, j, 0) - ratio(iz, 0, c2, j, 0)) / (2.0 * ag.v[0].spacing());
            if (n2 == 3) d += (ratio(iz, c1, 2, j, 1) - ratio(iz, c1, 0, j, 1)) / (2.0 * ag.v[1].spacing());
            if (nv >= 3) {
                if (j == 0)
                    d += (-3.0 * ratio(iz, c1, c2, 0, 2) + 4.0 * ratio(iz, c1, c2, 1, 2) - ratio(iz, c1, c2, 2, 2)) /
                         (2.0 * dv);
                else if (j == nv - 1)
                    d += (3.0 * ratio(iz, c1, c2, j, 2) - 4.0 * ratio(iz, c1, c2, j - 1, 2) +
                          ratio(iz, c1, c2, j - 2, 2)) /
                         (2.0 * dv);
                else
                    d += (ratio(iz, c1, c2, j + 1, 2) - ratio(iz, c1, c2, j - 1, 2)) / (2.0 * dv);
            }
            div[static_cast<std::size_t>(iz) * nv + j] = d;
        }
    return div;
}

double entropy_rate_exact(const DistG& g, const AccelField& accel) {
    const std::vector<double> div = accel_divergence(g, accel);
    const kernels::Layout lay = g.layout();
    double s = 0.0;
    for (std::size_t i = 0; i < div.size(); ++i) s += g.values[i] * div[i];
    return s * lay.dz * lay.dv;
}

EntropyReport entropy_rate_from_moments(const std::vector<FourVector>& J, const std::vector<Tensor4>& S,
                                        const std::vector<Tensor4>& F, const FourVector& j_ext, double charge,
                                        double mass, double dz) {
    if (J.size() != S.size() || J.size() != F.size()) throw std::invalid_argument("moment arrays differ in length");
    EntropyReport r;
    const double field_coeff = 4.0 * charge * charge / (mass * mass * mass);
    for (std::size_t i = 0; i < J.size(); ++i) {
        r.self_term -= minkowski_dot(J[i], J[i]) / mass * dz;
        r.ext_term -= minkowski_dot(J[i], j_ext) / mass * dz;
        const Tensor4 T = stress_energy(F[i]);
        double ts = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) ts += T[a][b] * S[i][a][b];
        r.field_term -= field_coeff * ts * dz;
    }
    r.dS_dt_first_order = r.self_term + r.ext_term + r.field_term;
    return r;
}

EntropyReport entropy_rate_first_order(const DistG& g0, const std::vector<Tensor4>& F0, const FourVector& j_ext,
                                       double charge, double mass) {
    const CurrentMoment cm = current_moment(g0, charge);
    std::vector<FourVector> J(cm.j0.size());
    for (std::size_t i = 0; i < J.size(); ++i) J[i] = {{cm.j0[i], 0.0, 0.0, cm.j3[i]}};
    EntropyReport r = entropy_rate_from_moments(J, stress_moment(g0, mass), F0, j_ext, charge, mass, g0.grid.z.spacing());
    r.S_total = entropy_total(g0);
    return r;
}

AccelField transverse_accel(const PlasmaState& state, int order, double h) {
    PhaseGrid grid = state.g.grid;
    grid.v[0] = Axis::transverse_stencil(h);
    grid.v[1] = Axis::transverse_stencil(h);
    return build_accel_field(field_grid(state), grid, state.params.q_over_m(), state.params.tau, order);
}

}  // namespace radkin
