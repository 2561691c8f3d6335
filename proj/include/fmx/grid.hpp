#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fmx/errors.hpp"

namespace fmx {

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

constexpr std::size_t index_of(Axis a) noexcept { return static_cast<std::size_t>(a); }

inline const char* axis_name(Axis a) noexcept {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

/// Cuboid [x_lo,x_hi] x [y_lo,y_hi] x [z_lo,z_hi] with periodic boundaries.
struct DomainSpec {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0, y_hi = 1.0;
    double z_lo = 0.0, z_hi = 1.0;

    static DomainSpec cube(double lo, double hi) { return {lo, hi, lo, hi, lo, hi}; }

    double lo(Axis a) const noexcept {
        return a == Axis::x ? x_lo : (a == Axis::y ? y_lo : z_lo);
    }
    double hi(Axis a) const noexcept {
        return a == Axis::x ? x_hi : (a == Axis::y ? y_hi : z_hi);
    }
    double length(Axis a) const noexcept { return hi(a) - lo(a); }

    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct GridIndex {
    std::size_t j = 0;  // x
    std::size_t k = 0;  // y
    std::size_t l = 0;  // z

    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Uniform periodic collocation grid over a cuboid.
///
/// Flattened layout is x fastest, then y, then z:
///   p = N_x*N_y*l + N_x*k + j,  all indices zero-based.
/// Per-axis angular wavenumbers follow FFT ordering with the Nyquist entry set to
/// exactly zero:  nu * (0, 1, ..., N/2-1, 0, -N/2+1, ..., -1),  nu = 2*pi / L.
class GridSpec {
public:
    GridSpec(const DomainSpec& domain, int n_x, int n_y, int n_z) : domain_(domain) {
        const std::array<int, 3> counts{n_x, n_y, n_z};
        for (Axis a : kAxes) {
            const int n = counts[index_of(a)];
            if (n < 2 || n % 2 != 0) {
                throw InvalidArgument(std::string("grid size along ") + axis_name(a) +
                                      " must be an even integer >= 2, got " + std::to_string(n));
            }
            if (!std::isfinite(domain.lo(a)) || !std::isfinite(domain.hi(a)) ||
                !(domain.hi(a) > domain.lo(a))) {
                throw InvalidArgument(std::string("degenerate domain along ") + axis_name(a) +
                                      ": hi must be strictly greater than lo");
            }
            auto& ax = axes_[index_of(a)];
            ax.n = static_cast<std::size_t>(n);
            ax.step = domain.length(a) / n;
            ax.nu = 2.0 * std::numbers::pi / domain.length(a);
            ax.points.resize(ax.n);
            ax.kvec.resize(ax.n);
            const std::size_t half = ax.n / 2;
            for (std::size_t m = 0; m < ax.n; ++m) {
                ax.points[m] = domain.lo(a) + static_cast<double>(m) * ax.step;
                if (m < half) {
                    ax.kvec[m] = ax.nu * static_cast<double>(m);
                } else if (m == half) {
                    ax.kvec[m] = 0.0;
                } else {
                    ax.kvec[m] = -(ax.nu * static_cast<double>(ax.n - m));
                }
            }
        }
    }

    const DomainSpec& domain() const noexcept { return domain_; }

    std::size_t n(Axis a) const noexcept { return axes_[index_of(a)].n; }
    std::size_t nx() const noexcept { return n(Axis::x); }
    std::size_t ny() const noexcept { return n(Axis::y); }
    std::size_t nz() const noexcept { return n(Axis::z); }
    /// Total number of grid points N_S.
    std::size_t size() const noexcept { return nx() * ny() * nz(); }

    double step(Axis a) const noexcept { return axes_[index_of(a)].step; }
    double base_frequency(Axis a) const noexcept { return axes_[index_of(a)].nu; }

    std::span<const double> points(Axis a) const noexcept { return axes_[index_of(a)].points; }
    std::span<const double> wavenumbers(Axis a) const noexcept { return axes_[index_of(a)].kvec; }

    double max_abs_wavenumber(Axis a) const noexcept {
        // largest resolved mode is N/2 - 1
        return base_frequency(a) * static_cast<double>(n(a) / 2 - 1);
    }

    std::size_t flatten(std::size_t j, std::size_t k, std::size_t l) const {
        if (j >= nx() || k >= ny() || l >= nz()) {
            throw InvalidArgument("grid index (" + std::to_string(j) + "," + std::to_string(k) +
                                  "," + std::to_string(l) + ") out of range");
        }
        return (l * ny() + k) * nx() + j;
    }

    GridIndex unflatten(std::size_t p) const {
        if (p >= size()) {
            throw InvalidArgument("flat index " + std::to_string(p) + " out of range");
        }
        return {p % nx(), (p / nx()) % ny(), p / (nx() * ny())};
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.domain_ == b.domain_ && a.nx() == b.nx() && a.ny() == b.ny() && a.nz() == b.nz();
    }

private:
    struct AxisData {
        std::size_t n = 0;
        double step = 0.0;
        double nu = 0.0;
        std::vector<double> points;
        std::vector<double> kvec;
    };

    DomainSpec domain_;
    std::array<AxisData, 3> axes_;
};

using GridPtr = std::shared_ptr<const GridSpec>;

inline GridPtr build_grid(const DomainSpec& domain, int n_x, int n_y, int n_z) {
    return std::make_shared<const GridSpec>(domain, n_x, n_y, n_z);
}

inline GridPtr build_grid(const DomainSpec& domain, int n) { return build_grid(domain, n, n, n); }

inline std::size_t flatten_index(std::size_t j, std::size_t k, std::size_t l, const GridSpec& grid) {
    return grid.flatten(j, k, l);
}

inline GridIndex unflatten_index(std::size_t p, const GridSpec& grid) { return grid.unflatten(p); }

}  // namespace fmx
