#pragma once

// Three-dimensional DFT pair and Fourier-space differentiation.
//
// Conventions:
//   forward:  F[m] = sum_p f[p] exp(-2 pi i (m_x j/N_x + m_y k/N_y + m_z l/N_z))   (unnormalized)
//   inverse:  f[p] = (1/N_S) sum_m F[m] exp(+2 pi i (...))
// Both use the grid's flattened x-fastest layout for modes as well as points.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/grid.hpp"

namespace fmx {

namespace detail {

// The FFTW planner is not thread safe; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// Pair of FFTW plans for one grid shape. Plans are created with FFTW_ESTIMATE so
/// results are deterministic run to run, and with FFTW_UNALIGNED so they can be
/// executed on any std::vector storage.
class Fft3 {
public:
    Fft3(std::size_t nx, std::size_t ny, std::size_t nz) : n_(nx * ny * nz) {
        std::lock_guard lock(detail::fftw_planner_mutex());
        auto* in = fftw_alloc_complex(n_);
        auto* out = fftw_alloc_complex(n_);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        // FFTW is row-major with the last index fastest, so dimensions go (z, y, x).
        const int dz = static_cast<int>(nz), dy = static_cast<int>(ny), dx = static_cast<int>(nx);
        forward_ = fftw_plan_dft_3d(dz, dy, dx, in, out, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_3d(dz, dy, dx, in, out, FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
        if (!forward_ || !backward_) throw Error("FFTW failed to create a 3D plan");
    }

    ~Fft3() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    std::size_t size() const noexcept { return n_; }

    // in and out must not alias (plans are out-of-place).
    void forward(const cplx* in, cplx* out) const { execute(forward_, in, out); }
    void backward(const cplx* in, cplx* out) const { execute(backward_, in, out); }

    /// Shared plan for a grid shape; plans are cached for the lifetime of the process.
    static std::shared_ptr<const Fft3> for_grid(const GridSpec& g) {
        static std::mutex cache_mutex;
        static std::map<std::array<std::size_t, 3>, std::shared_ptr<const Fft3>> cache;
        const std::array<std::size_t, 3> key{g.nx(), g.ny(), g.nz()};
        std::lock_guard lock(cache_mutex);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, std::make_shared<const Fft3>(g.nx(), g.ny(), g.nz())).first;
        }
        return it->second;
    }

private:
    static void execute(fftw_plan plan, const cplx* in, cplx* out) {
        // new-array execute never writes to the input of an out-of-place plan
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    std::size_t n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

inline SpectralField dft3_forward(const ComplexPhysicalField& f) {
    SpectralField out(f.grid_ptr());
    Fft3::for_grid(f.grid())->forward(f.data().data(), out.data().data());
    return out;
}

inline SpectralField dft3_forward(const PhysicalField& f) {
    std::vector<cplx> buf(f.begin(), f.end());
    return dft3_forward(ComplexPhysicalField(f.grid_ptr(), std::move(buf)));
}

inline ComplexPhysicalField dft3_inverse(const SpectralField& F) {
    ComplexPhysicalField out(F.grid_ptr());
    Fft3::for_grid(F.grid())->backward(F.data().data(), out.data().data());
    const double scale = 1.0 / static_cast<double>(F.size());
    for (auto& v : out) v *= scale;
    return out;
}

/// Outcome of dropping the imaginary part of a nominally real field.
struct Realized {
    PhysicalField field;
    double max_imag = 0.0;   // largest |Im| encountered
    double threshold = 0.0;  // 1e-10 * max(max|f|, reference_scale)
    bool ok = true;          // max_imag <= threshold
};

inline constexpr double kImagResidueTolerance = 1e-10;

/// Takes real parts and measures what was discarded. `reference_scale` lets a caller
/// judge a component against the magnitude of the whole state it belongs to, so a
/// component that is identically zero up to roundoff is not flagged.
inline Realized realize(const ComplexPhysicalField& f, double reference_scale = 0.0) {
    Realized r;
    r.field = PhysicalField(f.grid_ptr());
    double magnitude = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) {
        r.field[p] = f[p].real();
        r.max_imag = std::max(r.max_imag, std::abs(f[p].imag()));
        magnitude = std::max(magnitude, std::abs(f[p]));
    }
    r.threshold = kImagResidueTolerance * std::max(magnitude, reference_scale);
    r.ok = r.max_imag <= r.threshold;
    return r;
}

/// realize() that throws ImaginaryResidueError instead of reporting.
inline PhysicalField realize_checked(const ComplexPhysicalField& f, double reference_scale = 0.0) {
    auto r = realize(f, reference_scale);
    if (!r.ok) {
        throw ImaginaryResidueError("imaginary residue " + std::to_string(r.max_imag) +
                                        " exceeds tolerance; conjugate symmetry was broken upstream",
                                    r.max_imag, r.threshold);
    }
    return std::move(r.field);
}

/// Multiplies every coefficient by i*k along `axis`. The Nyquist index carries k = 0
/// and is annihilated.
inline SpectralField apply_derivative(const SpectralField& F, Axis axis) {
    const GridSpec& g = F.grid();
    const auto kv = g.wavenumbers(axis);
    SpectralField out(F.grid_ptr());
    std::size_t p = 0;
    for (std::size_t l = 0; l < g.nz(); ++l)
        for (std::size_t k = 0; k < g.ny(); ++k)
            for (std::size_t j = 0; j < g.nx(); ++j, ++p) {
                const double kw = axis == Axis::x ? kv[j] : (axis == Axis::y ? kv[k] : kv[l]);
                const cplx v = F[p];
                out[p] = cplx(-kw * v.imag(), kw * v.real());
            }
    return out;
}

/// Spectral derivative of a real field, returned in physical space.
inline PhysicalField differentiate(const PhysicalField& f, Axis axis) {
    const double scale = max_abs(f) * f.grid().base_frequency(axis) * static_cast<double>(f.grid().n(axis));
    return realize_checked(dft3_inverse(apply_derivative(dft3_forward(f), axis)), scale);
}

}  // namespace fmx
