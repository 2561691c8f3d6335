#pragma once

// Closed-form Maxwell solutions used as initial data and as error references.
//
// Standing wave (integer k with k_x + k_y + k_z = 0, omega = |k| / sqrt(eps mu)):
//   E_x = (k_y - k_z)/(eps omega) cos(omega pi t) cos(k_x pi x) sin(k_y pi y) sin(k_z pi z)
//   E_y = (k_z - k_x)/(eps omega) cos(omega pi t) sin(k_x pi x) cos(k_y pi y) sin(k_z pi z)
//   E_z = (k_x - k_y)/(eps omega) cos(omega pi t) sin(k_x pi x) sin(k_y pi y) cos(k_z pi z)
//   H_x = sin(omega pi t) sin(k_x pi x) cos(k_y pi y) cos(k_z pi z)
//   H_y = sin(omega pi t) cos(k_x pi x) sin(k_y pi y) cos(k_z pi z)
//   H_z = sin(omega pi t) cos(k_x pi x) cos(k_y pi y) sin(k_z pi z)
//
// Traveling wave (eps = mu = 1, unit cube):
//   E_x = cos(2 pi (x + y + z) - 2 sqrt(3) pi t),  E_y = -2 E_x,  E_z = E_x,
//   H_x = sqrt(3) E_x,  H_y = 0,  H_z = -sqrt(3) E_x

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/grid.hpp"
#include "fmx/propagator.hpp"

namespace fmx {

enum class WaveKind { standing, traveling };

inline const char* wave_kind_name(WaveKind k) { return k == WaveKind::standing ? "standing" : "traveling"; }

struct AnalyticCase {
    WaveKind kind = WaveKind::standing;
    int kx = 1, ky = 2, kz = -3;  // standing only
    MediumParams medium{};
    double omega = 0.0;  // standing only

    static AnalyticCase standing(int kx = 1, int ky = 2, int kz = -3, MediumParams medium = {}) {
        medium.validate();
        if (kx == 0 && ky == 0 && kz == 0) throw InvalidArgument("standing wave needs a nonzero k");
        if (kx + ky + kz != 0) {
            // otherwise the field is neither divergence free nor a solution of the curl equations
            throw InvalidArgument("standing wave requires k_x + k_y + k_z = 0");
        }
        AnalyticCase c;
        c.kind = WaveKind::standing;
        c.kx = kx;
        c.ky = ky;
        c.kz = kz;
        c.medium = medium;
        c.omega = std::sqrt(static_cast<double>(kx * kx + ky * ky + kz * kz) / (medium.eps * medium.mu));
        return c;
    }

    static AnalyticCase traveling() {
        AnalyticCase c;
        c.kind = WaveKind::traveling;
        c.kx = c.ky = c.kz = 0;
        c.medium = MediumParams{1.0, 1.0};
        return c;
    }

    DomainSpec default_domain() const {
        return kind == WaveKind::standing ? DomainSpec::cube(0.0, 2.0) : DomainSpec::cube(0.0, 1.0);
    }

    /// Angular wavenumber of the solution along `a` (same for every component).
    double angular_wavenumber(Axis a) const {
        if (kind == WaveKind::traveling) return 2.0 * std::numbers::pi;
        const int k = a == Axis::x ? kx : (a == Axis::y ? ky : kz);
        return std::abs(k) * std::numbers::pi;
    }
};

using FieldValues = std::array<double, 6>;  // E_x, E_y, E_z, H_x, H_y, H_z

inline FieldValues eval(const AnalyticCase& c, double x, double y, double z, double t) {
    constexpr double pi = std::numbers::pi;
    if (c.kind == WaveKind::traveling) {
        const double ex = std::cos(2.0 * pi * (x + y + z) - 2.0 * std::numbers::sqrt3 * pi * t);
        const double s3 = std::numbers::sqrt3 * ex;
        return {ex, -2.0 * ex, ex, s3, 0.0, -s3};
    }
    const double cx = std::cos(c.kx * pi * x), sx = std::sin(c.kx * pi * x);
    const double cy = std::cos(c.ky * pi * y), sy = std::sin(c.ky * pi * y);
    const double cz = std::cos(c.kz * pi * z), sz = std::sin(c.kz * pi * z);
    const double amp = 1.0 / (c.medium.eps * c.omega);
    const double ct = std::cos(c.omega * pi * t);
    const double st = std::sin(c.omega * pi * t);
    return {
        (c.ky - c.kz) * amp * ct * cx * sy * sz,
        (c.kz - c.kx) * amp * ct * sx * cy * sz,
        (c.kx - c.ky) * amp * ct * sx * sy * cz,
        st * sx * cy * cz,
        st * cx * sy * cz,
        st * cx * cy * sz,
    };
}

/// Rejects grids on which the case is not periodic or would alias into the
/// Nyquist mode. The mode index along an axis must satisfy N >= 2*m + 2.
inline void check_resolves(const AnalyticCase& c, const GridSpec& g) {
    for (Axis a : kAxes) {
        const double m_real = c.angular_wavenumber(a) / g.base_frequency(a);
        const double m = std::round(m_real);
        if (std::abs(m_real - m) > 1e-9 * std::max(1.0, m)) {
            throw AliasingError(std::string(wave_kind_name(c.kind)) + " wave is not periodic on the domain along " +
                                axis_name(a));
        }
        const auto need = static_cast<std::size_t>(2.0 * m + 2.0);
        if (g.n(a) < need) {
            throw AliasingError(std::string("grid too coarse along ") + axis_name(a) + ": " +
                                wave_kind_name(c.kind) + " wave has mode " + std::to_string(static_cast<int>(m)) +
                                ", needs N >= " + std::to_string(need) + " but N = " + std::to_string(g.n(a)));
        }
    }
}

/// Exact solution at time t sampled on the grid, after the resolution check.
inline PhysicalState sample(const AnalyticCase& c, const GridPtr& grid, double t) {
    check_resolves(c, *grid);
    PhysicalState s = PhysicalState::zeros(grid, c.medium, t);
    const auto xs = grid->points(Axis::x);
    const auto ys = grid->points(Axis::y);
    const auto zs = grid->points(Axis::z);
    std::size_t p = 0;
    for (std::size_t l = 0; l < zs.size(); ++l)
        for (std::size_t k = 0; k < ys.size(); ++k)
            for (std::size_t j = 0; j < xs.size(); ++j, ++p) {
                const FieldValues v = eval(c, xs[j], ys[k], zs[l], t);
                for (std::size_t q = 0; q < 6; ++q) s.components[q][p] = v[q];
            }
    return s;
}

inline PhysicalState sample_initial(const AnalyticCase& c, const GridPtr& grid) { return sample(c, grid, 0.0); }

}  // namespace fmx
