#include "radkin/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace radkin::kernels {

namespace {

struct Line {
    int n;
    bool periodic;
    double h;
    double dt;
    AdvectionScheme scheme;
};

double face_speed(const Line& line, std::span<const double> speed, int f) {
    if (speed.size() == 1) return speed[0];
    if (line.periodic) {
        const int l = (f + line.n - 1) % line.n;
        return 0.5 * (speed[static_cast<std::size_t>(l)] + speed[static_cast<std::size_t>(f % line.n)]);
    }
    return 0.5 * (speed[static_cast<std::size_t>(f - 1)] + speed[static_cast<std::size_t>(f)]);
}

// One conservative step along a line of n cells. `speed` is either a single
// uniform speed or one value per cell. `flux` receives the n + 1 face fluxes
// (face n duplicates face 0 when periodic). `work` needs room for n values.
void sweep_line(double* g, const Line& line, std::span<const double> speed, double* flux, double* work) {
    const int n = line.n;
    const double lambda = line.dt / line.h;
    auto cell = [&](int k) -> double {
        if (line.periodic) return g[(k % n + n) % n];
        return g[std::clamp(k, 0, n - 1)];
    };

    double* slope = work;
    if (line.scheme == AdvectionScheme::VanLeer) {
        for (int k = 0; k < n; ++k) {
            if (!line.periodic && (k == 0 || k == n - 1)) {
                slope[k] = 0.0;
                continue;
            }
            slope[k] = van_leer_slope(cell(k) - cell(k - 1), cell(k + 1) - cell(k));
        }
    }

    const int first = line.periodic ? 0 : 1;
    const int last = n - 1;
    if (!line.periodic) {
        // Outflow-only boundary faces, upwinded with the node speed.
        const double a0 = speed[0];
        const double an = speed.size() == 1 ? speed[0] : speed[static_cast<std::size_t>(n - 1)];
        flux[0] = a0 < 0.0 ? a0 * g[0] : 0.0;
        flux[n] = an > 0.0 ? an * g[n - 1] : 0.0;
    }
    for (int f = first; f <= last; ++f) {
        const double a = face_speed(line, speed, f);
        const double c = a * lambda;
        const double gl = cell(f - 1);
        const double gr = cell(f);
        if (line.scheme == AdvectionScheme::LaxWendroffPositive) {
            flux[f] = lax_wendroff_flux(a, c, gl, gr);
        } else if (a >= 0.0) {
            const int l = line.periodic ? (f - 1 + n) % n : f - 1;
            flux[f] = a * (gl + 0.5 * (1.0 - c) * slope[l]);
        } else {
            const int r = line.periodic ? f % n : f;
            flux[f] = a * (gr - 0.5 * (1.0 + c) * slope[r]);
        }
    }
    if (line.periodic) flux[n] = flux[0];

    // Donor-cell rescaling: no cell may lose more than it holds.
    double* ratio = work;
    for (int k = 0; k < n; ++k) {
        const double out = std::max(0.0, -flux[k]) + std::max(0.0, flux[k + 1]);
        const double budget = lambda * out;
        ratio[k] = budget > g[k] ? (g[k] > 0.0 ? g[k] / budget : 0.0) : 1.0;
    }
    for (int f = 0; f <= n; ++f) {
        if (line.periodic && f == n) {
            flux[n] = flux[0];
            break;
        }
        int donor = flux[f] > 0.0 ? f - 1 : f;
        if (line.periodic)
            donor = (donor + n) % n;
        else if (donor < 0 || donor >= n)
            continue;
        flux[f] *= ratio[donor];
    }
    for (int k = 0; k < n; ++k) g[k] -= lambda * (flux[k + 1] - flux[k]);
}

void check(std::span<double> g, const Layout& lay) {
    if (lay.nz < 1 || lay.nv < 1 || g.size() != lay.size())
        throw std::invalid_argument("distribution does not match the grid layout");
}

template <bool Parallel>
ZSweep advect_z_impl(std::span<double> g, const Layout& lay, std::span<const double> speed, double dt,
                     AdvectionScheme scheme) {
    check(g, lay);
    if (speed.size() != static_cast<std::size_t>(lay.nv)) throw std::invalid_argument("speed size != nv");
    const int nz = lay.nz;
    const int nv = lay.nv;
    const Line line{nz, true, lay.dz, dt, scheme};
    std::vector<double> flux(static_cast<std::size_t>(nv) * static_cast<std::size_t>(nz + 1));

#pragma omp parallel if (Parallel)
    {
        std::vector<double> column(static_cast<std::size_t>(nz));
        std::vector<double> work(static_cast<std::size_t>(nz));
#pragma omp for schedule(static)
        for (int iv = 0; iv < nv; ++iv) {
            for (int iz = 0; iz < nz; ++iz)
                column[static_cast<std::size_t>(iz)] = g[static_cast<std::size_t>(iz) * nv + iv];
            sweep_line(column.data(), line, speed.subspan(static_cast<std::size_t>(iv), 1),
                       &flux[static_cast<std::size_t>(iv) * (nz + 1)], work.data());
            for (int iz = 0; iz < nz; ++iz)
                g[static_cast<std::size_t>(iz) * nv + iv] = column[static_cast<std::size_t>(iz)];
        }
    }

    ZSweep out;
    out.face_flux.assign(static_cast<std::size_t>(nz), 0.0);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int f = 0; f < nz; ++f) {
        double s = 0.0;
        for (int iv = 0; iv < nv; ++iv) s += flux[static_cast<std::size_t>(iv) * (nz + 1) + f];
        out.face_flux[static_cast<std::size_t>(f)] = s * lay.dv;
    }
    return out;
}

template <bool Parallel>
VSweep advect_v_impl(std::span<double> g, const Layout& lay, std::span<const double> accel, double dt,
                     AdvectionScheme scheme) {
    check(g, lay);
    if (accel.size() != lay.size()) throw std::invalid_argument("acceleration size != grid size");
    const int nz = lay.nz;
    const int nv = lay.nv;
    const Line line{nv, false, lay.dv, dt, scheme};
    std::vector<double> loss(static_cast<std::size_t>(nz));

#pragma omp parallel if (Parallel)
    {
        std::vector<double> flux(static_cast<std::size_t>(nv + 1));
        std::vector<double> work(static_cast<std::size_t>(nv));
#pragma omp for schedule(static)
        for (int iz = 0; iz < nz; ++iz) {
            const std::size_t off = static_cast<std::size_t>(iz) * nv;
            sweep_line(&g[off], line, accel.subspan(off, static_cast<std::size_t>(nv)), flux.data(), work.data());
            loss[static_cast<std::size_t>(iz)] =
                dt * lay.dz * (std::max(0.0, -flux[0]) + std::max(0.0, flux[static_cast<std::size_t>(nv)]));
        }
    }
    VSweep out;
    for (double l : loss) out.boundary_loss += l;
    return out;
}

}  // namespace

namespace serial {
ZSweep advect_z(std::span<double> g, const Layout& lay, std::span<const double> speed, double dt,
                AdvectionScheme scheme) {
    return advect_z_impl<false>(g, lay, speed, dt, scheme);
}
VSweep advect_v(std::span<double> g, const Layout& lay, std::span<const double> accel, double dt,
                AdvectionScheme scheme) {
    return advect_v_impl<false>(g, lay, accel, dt, scheme);
}
}  // namespace serial

namespace omp {
ZSweep advect_z(std::span<double> g, const Layout& lay, std::span<const double> speed, double dt,
                AdvectionScheme scheme) {
    return advect_z_impl<true>(g, lay, speed, dt, scheme);
}
VSweep advect_v(std::span<double> g, const Layout& lay, std::span<const double> accel, double dt,
                AdvectionScheme scheme) {
    return advect_v_impl<true>(g, lay, accel, dt, scheme);
}
}  // namespace omp

}  // namespace radkin::kernels
