#pragma once

// Exact exponential time evolution of the Fourier-collocated Maxwell system.
//
// In Fourier space every mode with angular wavenumber b = (b_x, b_y, b_z) evolves
// independently. With kappa = t / sqrt(mu*eps) and theta = |kappa| |b|:
//
//   C = I + kappa^2 r1 (|b|^2 I - b b^T),      r1 = (cos(theta) - 1) / theta^2
//   S = i kappa r2 [b]_x,                        r2 = sin(theta) / theta
//
// and the scaled fields (sqrt(mu) H, sqrt(eps) E) map as
//
//   sqrt(mu)  H' = C sqrt(mu) H - S sqrt(eps) E
//   sqrt(eps) E' = S sqrt(mu) H + C sqrt(eps) E
//
// A single application reaches any time; there is no stability restriction.

#include <array>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/grid.hpp"
#include "fmx/spectral.hpp"

namespace fmx {

struct MediumParams {
    double mu = 1.0;   // magnetic permeability
    double eps = 1.0;  // electric permittivity

    void validate() const {
        if (!std::isfinite(mu) || !(mu > 0.0)) throw InvalidArgument("mu must be finite and > 0");
        if (!std::isfinite(eps) || !(eps > 0.0)) throw InvalidArgument("eps must be finite and > 0");
    }

    friend bool operator==(const MediumParams&, const MediumParams&) = default;
};

/// Component slots of a field state, electric first.
enum class Component : std::size_t { ex = 0, ey, ez, hx, hy, hz };

inline constexpr std::array<const char*, 6> kComponentNames{"E_x", "E_y", "E_z", "H_x", "H_y", "H_z"};

/// The six field components at one instant, all on the same grid.
template <class FieldT>
struct FieldState {
    GridPtr grid;
    MediumParams medium;
    double time = 0.0;
    std::array<FieldT, 6> components;

    FieldT& operator[](Component c) { return components[static_cast<std::size_t>(c)]; }
    const FieldT& operator[](Component c) const { return components[static_cast<std::size_t>(c)]; }

    FieldT& e(Axis a) { return components[index_of(a)]; }
    const FieldT& e(Axis a) const { return components[index_of(a)]; }
    FieldT& h(Axis a) { return components[3 + index_of(a)]; }
    const FieldT& h(Axis a) const { return components[3 + index_of(a)]; }

    static FieldState zeros(GridPtr grid, MediumParams medium, double time = 0.0) {
        medium.validate();
        FieldState s{std::move(grid), medium, time, {}};
        for (auto& c : s.components) c = FieldT(s.grid);
        return s;
    }

    /// Throws if a component is missing or sits on a different grid.
    void validate() const {
        if (!grid) throw InvalidArgument("field state has no grid");
        medium.validate();
        for (const auto& c : components) {
            if (!c.grid_ptr()) throw InvalidArgument("field state has an empty component");
            if (c.grid_ptr() != grid && !(c.grid() == *grid)) {
                throw Mismatch("field state components do not share the state grid");
            }
        }
    }
};

using PhysicalState = FieldState<PhysicalField>;
using SpectralState = FieldState<SpectralField>;

inline double max_abs(const PhysicalState& s) {
    double m = 0.0;
    for (const auto& c : s.components) m = std::max(m, max_abs(c));
    return m;
}

inline SpectralState to_spectral(const PhysicalState& s) {
    s.validate();
    SpectralState out{s.grid, s.medium, s.time, {}};
    for (std::size_t c = 0; c < 6; ++c) out.components[c] = dft3_forward(s.components[c]);
    return out;
}

struct RealizedState {
    PhysicalState state;
    double max_imag = 0.0;  // worst residue over all components
    bool ok = true;
};

/// Inverse transforms every component. Residues are judged against the largest
/// magnitude in the whole state.
inline RealizedState realize_state(const SpectralState& s) {
    std::array<ComplexPhysicalField, 6> raw;
    double scale = 0.0;
    for (std::size_t c = 0; c < 6; ++c) {
        raw[c] = dft3_inverse(s.components[c]);
        scale = std::max(scale, max_abs(raw[c]));
    }
    RealizedState out{PhysicalState{s.grid, s.medium, s.time, {}}, 0.0, true};
    for (std::size_t c = 0; c < 6; ++c) {
        auto r = realize(raw[c], scale);
        out.max_imag = std::max(out.max_imag, r.max_imag);
        out.ok = out.ok && r.ok;
        out.state.components[c] = std::move(r.field);
    }
    return out;
}

inline PhysicalState to_physical(const SpectralState& s) {
    auto r = realize_state(s);
    if (!r.ok) {
        throw ImaginaryResidueError("imaginary residue " + std::to_string(r.max_imag) +
                                        " after inverse transform; conjugate symmetry was broken",
                                    r.max_imag, kImagResidueTolerance * max_abs(r.state));
    }
    return std::move(r.state);
}

/// Per-axis wavenumbers spread onto the flattened layout.
struct BroadcastWavenumbers {
    std::vector<double> bx, by, bz;
};

inline BroadcastWavenumbers broadcast_wavenumbers(const GridSpec& g) {
    BroadcastWavenumbers b;
    b.bx.resize(g.size());
    b.by.resize(g.size());
    b.bz.resize(g.size());
    const auto kx = g.wavenumbers(Axis::x);
    const auto ky = g.wavenumbers(Axis::y);
    const auto kz = g.wavenumbers(Axis::z);
    std::size_t p = 0;
    for (std::size_t l = 0; l < g.nz(); ++l)
        for (std::size_t k = 0; k < g.ny(); ++k)
            for (std::size_t j = 0; j < g.nx(); ++j, ++p) {
                b.bx[p] = kx[j];
                b.by[p] = ky[k];
                b.bz[p] = kz[l];
            }
    return b;
}

/// Per-mode coefficients of the exact propagator for a fixed time t. Immutable once built;
/// one instance can be applied to any number of states on the same grid and medium.
///
/// s12, s13, s23 hold the imaginary parts; the actual coefficients are i*s12 etc.
struct PropagatorCoefficients {
    GridPtr grid;
    MediumParams medium;
    double t = 0.0;
    double kappa = 0.0;
    BroadcastWavenumbers b;
    std::vector<double> psi;
    std::vector<double> r1, r2;
    std::vector<double> c11, c12, c13, c22, c23, c33;
    std::vector<double> s12, s13, s23;
};

inline PropagatorCoefficients build_coefficients(GridPtr grid, const MediumParams& medium, double t) {
    if (!grid) throw InvalidArgument("build_coefficients: null grid");
    medium.validate();
    if (!std::isfinite(t)) throw InvalidArgument("propagation time must be finite");

    PropagatorCoefficients pc;
    pc.grid = std::move(grid);
    pc.medium = medium;
    pc.t = t;
    pc.kappa = t / std::sqrt(medium.mu * medium.eps);
    pc.b = broadcast_wavenumbers(*pc.grid);

    const std::size_t n = pc.grid->size();
    for (auto* v : {&pc.psi, &pc.r1, &pc.r2, &pc.c11, &pc.c12, &pc.c13, &pc.c22, &pc.c23, &pc.c33, &pc.s12,
                    &pc.s13, &pc.s23}) {
        v->resize(n);
    }

    const double kappa = pc.kappa;
    const double k2 = kappa * kappa;
    for (std::size_t p = 0; p < n; ++p) {
        const double bx = pc.b.bx[p], by = pc.b.by[p], bz = pc.b.bz[p];
        const double bx2 = bx * bx, by2 = by * by, bz2 = bz * bz;
        const double b2 = bx2 + by2 + bz2;
        pc.psi[p] = k2 * b2;

        // theta = 0 happens at the eight all-{0, Nyquist} modes and everywhere when t = 0;
        // every term there carries a zero factor, the limits just keep it branch free.
        double r1 = -0.5, r2 = 1.0;
        const double theta = std::abs(kappa) * std::sqrt(b2);
        if (theta != 0.0) {
            const double half = std::sin(0.5 * theta);
            r1 = -2.0 * half * half / (theta * theta);
            r2 = std::sin(theta) / theta;
        }
        pc.r1[p] = r1;
        pc.r2[p] = r2;

        pc.c11[p] = 1.0 + k2 * (bz2 + by2) * r1;
        pc.c22[p] = 1.0 + k2 * (bz2 + bx2) * r1;
        pc.c33[p] = 1.0 + k2 * (by2 + bx2) * r1;
        pc.c12[p] = -k2 * by * bx * r1;
        pc.c13[p] = -k2 * bz * bx * r1;
        pc.c23[p] = -k2 * bz * by * r1;

        pc.s12[p] = kappa * bz * r2;
        pc.s13[p] = kappa * by * r2;
        pc.s23[p] = kappa * bx * r2;
    }
    return pc;
}

inline PropagatorCoefficients build_coefficients(const GridSpec& grid, const MediumParams& medium, double t) {
    return build_coefficients(std::make_shared<const GridSpec>(grid), medium, t);
}

/// Advances a spectral state by coeffs.t.
///
/// The sqrt(mu)/sqrt(eps) scaling is folded into the admittance eta = sqrt(eps/mu):
///   H' = C H - eta S E,   E' = S H / eta + C E
/// which is algebraically the scaled update and leaves the t = 0 case bit-exact.
inline SpectralState step(const SpectralState& state, const PropagatorCoefficients& pc) {
    state.validate();
    if (!(*state.grid == *pc.grid)) throw Mismatch("step: state and coefficients use different grids");
    if (!(state.medium == pc.medium)) throw Mismatch("step: state and coefficients use different media");

    const double eta = std::sqrt(state.medium.eps / state.medium.mu);
    const double inv_eta = 1.0 / eta;
    const cplx I(0.0, 1.0);

    SpectralState out = SpectralState::zeros(state.grid, state.medium, state.time + pc.t);
    const auto& Ex = state[Component::ex];
    const auto& Ey = state[Component::ey];
    const auto& Ez = state[Component::ez];
    const auto& Hx = state[Component::hx];
    const auto& Hy = state[Component::hy];
    const auto& Hz = state[Component::hz];

    const std::size_t n = state.grid->size();
    for (std::size_t p = 0; p < n; ++p) {
        const double c11 = pc.c11[p], c12 = pc.c12[p], c13 = pc.c13[p];
        const double c22 = pc.c22[p], c23 = pc.c23[p], c33 = pc.c33[p];
        const cplx s12 = I * pc.s12[p], s13 = I * pc.s13[p], s23 = I * pc.s23[p];
        const cplx ex = Ex[p], ey = Ey[p], ez = Ez[p];
        const cplx hx = Hx[p], hy = Hy[p], hz = Hz[p];

        // S = [[0, -s12, s13], [s12, 0, -s23], [-s13, s23, 0]]
        const cplx sex = -s12 * ey + s13 * ez;
        const cplx sey = s12 * ex - s23 * ez;
        const cplx sez = -s13 * ex + s23 * ey;
        const cplx shx = -s12 * hy + s13 * hz;
        const cplx shy = s12 * hx - s23 * hz;
        const cplx shz = -s13 * hx + s23 * hy;

        out[Component::hx][p] = c11 * hx + c12 * hy + c13 * hz - eta * sex;
        out[Component::hy][p] = c12 * hx + c22 * hy + c23 * hz - eta * sey;
        out[Component::hz][p] = c13 * hx + c23 * hy + c33 * hz - eta * sez;
        out[Component::ex][p] = c11 * ex + c12 * ey + c13 * ez + inv_eta * shx;
        out[Component::ey][p] = c12 * ex + c22 * ey + c23 * ez + inv_eta * shy;
        out[Component::ez][p] = c13 * ex + c23 * ey + c33 * ez + inv_eta * shz;
    }
    return out;
}

/// Physical state at initial.time + coeffs.t, reached in one application.
inline PhysicalState propagate(const PhysicalState& initial, const PropagatorCoefficients& pc) {
    if (pc.t == 0.0) {
        // e^{0} = I; skip the transform round trip so the result is the input bit for bit
        initial.validate();
        if (!(*initial.grid == *pc.grid)) throw Mismatch("propagate: grid mismatch");
        if (!(initial.medium == pc.medium)) throw Mismatch("propagate: medium mismatch");
        return initial;
    }
    return to_physical(step(to_spectral(initial), pc));
}

inline PhysicalState propagate(const PhysicalState& initial, double t_end) {
    initial.validate();
    return propagate(initial, build_coefficients(initial.grid, initial.medium, t_end));
}

}  // namespace fmx
