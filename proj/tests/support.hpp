#pragma once

// Shared test helpers: random band-limited inputs and dense packing of states.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "fmx/fmx.hpp"

namespace fmx::test {

/// Real trigonometric polynomial with random coefficients on every mode |m_w| <= N_w/2 - 1,
/// so nothing sits on the Nyquist mode.
inline PhysicalField random_band_limited(const GridPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const int mx = static_cast<int>(g->nx()) / 2 - 1;
    const int my = static_cast<int>(g->ny()) / 2 - 1;
    const int mz = static_cast<int>(g->nz()) / 2 - 1;
    PhysicalField f(g);
    const auto xs = g->points(Axis::x), ys = g->points(Axis::y), zs = g->points(Axis::z);
    const double nx = g->base_frequency(Axis::x), ny = g->base_frequency(Axis::y), nz = g->base_frequency(Axis::z);
    for (int a = -mx; a <= mx; ++a)
        for (int b = -my; b <= my; ++b)
            for (int c = -mz; c <= mz; ++c) {
                const double ca = gauss(rng), sa = gauss(rng);
                std::size_t p = 0;
                for (double z : zs)
                    for (double y : ys)
                        for (double x : xs) {
                            const double phase = a * nx * x + b * ny * y + c * nz * z;
                            f[p++] += ca * std::cos(phase) + sa * std::sin(phase);
                        }
            }
    return f;
}

/// Unstructured real field, uniform in [-1, 1].
inline PhysicalField random_field(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhysicalField f(g);
    for (auto& v : f) v = u(rng);
    return f;
}

inline PhysicalState random_state(const GridPtr& g, const MediumParams& m, std::mt19937_64& rng) {
    auto s = PhysicalState::zeros(g, m);
    for (auto& c : s.components) c = random_band_limited(g, rng);
    return s;
}

/// (E_x, E_y, E_z, H_x, H_y, H_z) stacked into one vector of length 6 N_S.
inline Eigen::VectorXd pack(const PhysicalState& s) {
    const auto ns = static_cast<Eigen::Index>(s.grid->size());
    Eigen::VectorXd v(6 * ns);
    for (Eigen::Index c = 0; c < 6; ++c)
        for (Eigen::Index p = 0; p < ns; ++p) v[c * ns + p] = s.components[c][p];
    return v;
}

inline PhysicalState unpack(const Eigen::VectorXd& v, const GridPtr& g, const MediumParams& m, double time = 0.0) {
    auto s = PhysicalState::zeros(g, m, time);
    const auto ns = static_cast<Eigen::Index>(g->size());
    for (Eigen::Index c = 0; c < 6; ++c)
        for (Eigen::Index p = 0; p < ns; ++p) s.components[c][p] = v[c * ns + p];
    return s;
}

inline Eigen::VectorXd to_vector(const PhysicalField& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data().data(), static_cast<Eigen::Index>(f.size()));
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
    return m;
}

inline double max_abs_diff(const PhysicalState& a, const PhysicalState& b) {
    double m = 0.0;
    for (std::size_t c = 0; c < 6; ++c) m = std::max(m, max_abs_diff(a.components[c], b.components[c]));
    return m;
}

}  // namespace fmx::test
