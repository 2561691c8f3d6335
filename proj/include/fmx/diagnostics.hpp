#pragma once

// Discrete invariants of the semi-discrete Maxwell system and error metrics.
//
// Inner product:  <u, v>_N = (1 / N_S) sum_p u_p v_p   (real fields)
// D_k is spectral differentiation along axis k, D the spectral curl acting on a
// stacked 3-vector. All grid reductions use pairwise summation in a fixed order.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fmx/analytic.hpp"
#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/propagator.hpp"
#include "fmx/spectral.hpp"

namespace fmx {

namespace detail {

template <class Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
    constexpr std::size_t kBlock = 32;
    if (end - begin <= kBlock) {
        double s = 0.0;
        for (std::size_t p = begin; p < end; ++p) s += term(p);
        return s;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

}  // namespace detail

/// Deterministic pairwise sum of a sequence.
inline double pairwise_sum(std::span<const double> v) {
    return detail::pairwise_sum(0, v.size(), [&](std::size_t p) { return v[p]; });
}

inline double inner_product_N(const PhysicalField& u, const PhysicalField& v) {
    require_same_grid(u, v, "inner_product_N");
    const std::size_t n = u.size();
    return detail::pairwise_sum(0, n, [&](std::size_t p) { return u[p] * v[p]; }) / static_cast<double>(n);
}

inline double norm_N(const PhysicalField& u) { return std::sqrt(inner_product_N(u, u)); }

/// Time derivatives dE/dt = curl(H)/eps, dH/dt = -curl(E)/mu evaluated mode by mode.
inline SpectralState spectral_time_derivative(const SpectralState& s) {
    s.validate();
    const auto b = broadcast_wavenumbers(*s.grid);
    const cplx i_mu(0.0, 1.0 / s.medium.mu);
    const cplx i_eps(0.0, 1.0 / s.medium.eps);
    SpectralState d = SpectralState::zeros(s.grid, s.medium, s.time);
    for (std::size_t p = 0; p < s.grid->size(); ++p) {
        const double o1 = b.bx[p], o2 = b.by[p], o3 = b.bz[p];
        const cplx ex = s[Component::ex][p], ey = s[Component::ey][p], ez = s[Component::ez][p];
        const cplx hx = s[Component::hx][p], hy = s[Component::hy][p], hz = s[Component::hz][p];
        d[Component::hx][p] = -i_mu * (-o3 * ey + o2 * ez);
        d[Component::hy][p] = -i_mu * (o3 * ex - o1 * ez);
        d[Component::hz][p] = -i_mu * (-o2 * ex + o1 * ey);
        d[Component::ex][p] = i_eps * (-o3 * hy + o2 * hz);
        d[Component::ey][p] = i_eps * (o3 * hx - o1 * hz);
        d[Component::ez][p] = i_eps * (-o2 * hx + o1 * hy);
    }
    return d;
}

inline PhysicalState spectral_time_derivative(const PhysicalState& s) {
    return to_physical(spectral_time_derivative(to_spectral(s)));
}

namespace detail {

/// Inverse transforms a batch of nominally real fields, judging residues against the
/// largest magnitude in the batch.
inline std::vector<PhysicalField> realize_batch(const std::vector<SpectralField>& spec) {
    std::vector<ComplexPhysicalField> raw;
    raw.reserve(spec.size());
    double scale = 0.0;
    for (const auto& f : spec) {
        raw.push_back(dft3_inverse(f));
        scale = std::max(scale, max_abs(raw.back()));
    }
    std::vector<PhysicalField> out;
    out.reserve(raw.size());
    for (const auto& f : raw) out.push_back(realize_checked(f, scale));
    return out;
}

}  // namespace detail

/// The full set of conserved quadratic quantities, one slot per invariant.
/// Axis-indexed ones (E3..E6, M1, M2) are stored for k = x, y, z.
template <class T>
struct InvariantSet {
    T e1{}, e2{};
    std::array<T, 3> e3{}, e4{}, e5{}, e6{};
    T h1{}, h2{};
    std::array<T, 3> m1{}, m2{};
};

/// Calls f(name, member_of_each_set...) for every invariant, in a fixed order.
template <class F, class... Sets>
void for_each_invariant(F&& f, Sets&... sets) {
    static constexpr const char* kAxisSuffix[3] = {"_x", "_y", "_z"};
    f("e1", sets.e1...);
    f("e2", sets.e2...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("e3") + kAxisSuffix[k], sets.e3[k]...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("e4") + kAxisSuffix[k], sets.e4[k]...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("e5") + kAxisSuffix[k], sets.e5[k]...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("e6") + kAxisSuffix[k], sets.e6[k]...);
    f("h1", sets.h1...);
    f("h2", sets.h2...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("m1") + kAxisSuffix[k], sets.m1[k]...);
    for (std::size_t k = 0; k < 3; ++k) f(std::string("m2") + kAxisSuffix[k], sets.m2[k]...);
}

struct InvariantReport {
    double time = 0.0;
    InvariantSet<double> value;
    /// Cauchy-Schwarz magnitude bound of each invariant; equals the value for the
    /// positive definite energies E1..E4.
    InvariantSet<double> scale;
    double div_e_norm = 0.0;  // max |D_1(eps E_x) + D_2(eps E_y) + D_3(eps E_z)|
    double div_h_norm = 0.0;  // max |D_1(mu H_x) + D_2(mu H_y) + D_3(mu H_z)|
};

struct DivergenceReport {
    PhysicalField div_e;
    PhysicalField div_h;
    double div_e_norm = 0.0;
    double div_h_norm = 0.0;
};

inline DivergenceReport divergences(const SpectralState& s) {
    s.validate();
    std::vector<SpectralField> acc(2, SpectralField(s.grid));
    for (Axis a : kAxes) {
        const auto de = apply_derivative(s.e(a), a);
        const auto dh = apply_derivative(s.h(a), a);
        for (std::size_t p = 0; p < s.grid->size(); ++p) {
            acc[0][p] += s.medium.eps * de[p];
            acc[1][p] += s.medium.mu * dh[p];
        }
    }
    auto real = detail::realize_batch(acc);
    DivergenceReport r;
    r.div_e_norm = max_abs(real[0]);
    r.div_h_norm = max_abs(real[1]);
    r.div_e = std::move(real[0]);
    r.div_h = std::move(real[1]);
    return r;
}

inline DivergenceReport divergences(const PhysicalState& s) { return divergences(to_spectral(s)); }

namespace detail {

// Everything the invariants need, derived once from a state.
struct Derived {
    std::array<PhysicalField, 6> u;                    // E, H
    std::array<PhysicalField, 6> du;                   // dE/dt, dH/dt
    std::array<std::array<PhysicalField, 6>, 3> dk_u;  // D_k of u, per axis k
    std::array<std::array<PhysicalField, 6>, 3> dk_du;
    std::array<PhysicalField, 6> curl_u;   // curl E, curl H
    std::array<PhysicalField, 6> curl_du;  // curl dE/dt, curl dH/dt
};

inline std::array<PhysicalField, 6> to_array6(std::vector<PhysicalField> v) {
    std::array<PhysicalField, 6> a;
    for (std::size_t i = 0; i < 6; ++i) a[i] = std::move(v[i]);
    return a;
}

inline std::array<SpectralField, 6> curl6(const std::array<SpectralField, 6>& f) {
    std::array<SpectralField, 6> out;
    for (std::size_t half = 0; half < 2; ++half) {
        const auto& fx = f[3 * half];
        const auto& fy = f[3 * half + 1];
        const auto& fz = f[3 * half + 2];
        const std::array<SpectralField, 3> pos{apply_derivative(fz, Axis::y), apply_derivative(fx, Axis::z),
                                               apply_derivative(fy, Axis::x)};
        const std::array<SpectralField, 3> neg{apply_derivative(fy, Axis::z), apply_derivative(fz, Axis::x),
                                               apply_derivative(fx, Axis::y)};
        for (std::size_t w = 0; w < 3; ++w) {
            SpectralField c(fx.grid_ptr());
            for (std::size_t p = 0; p < c.size(); ++p) c[p] = pos[w][p] - neg[w][p];
            out[3 * half + w] = std::move(c);
        }
    }
    return out;
}

}  // namespace detail

/// Spectral curl of a real 3-vector field: (D_2 F_z - D_3 F_y, D_3 F_x - D_1 F_z, D_1 F_y - D_2 F_x).
inline std::array<PhysicalField, 3> spectral_curl(const std::array<PhysicalField, 3>& f) {
    std::array<SpectralField, 6> F{dft3_forward(f[0]), dft3_forward(f[1]), dft3_forward(f[2]),
                                   SpectralField(f[0].grid_ptr()), SpectralField(f[0].grid_ptr()),
                                   SpectralField(f[0].grid_ptr())};
    const auto c = detail::curl6(F);
    auto real = detail::realize_batch({c[0], c[1], c[2]});
    return {std::move(real[0]), std::move(real[1]), std::move(real[2])};
}

namespace detail {

inline Derived derive(const PhysicalState& s) {
    const SpectralState S = to_spectral(s);
    const SpectralState T = spectral_time_derivative(S);
    Derived d;
    d.u = s.components;
    d.du = to_physical(T).components;
    for (Axis a : kAxes) {
        std::vector<SpectralField> batch_u, batch_du;
        for (std::size_t c = 0; c < 6; ++c) {
            batch_u.push_back(apply_derivative(S.components[c], a));
            batch_du.push_back(apply_derivative(T.components[c], a));
        }
        d.dk_u[index_of(a)] = to_array6(realize_batch(batch_u));
        d.dk_du[index_of(a)] = to_array6(realize_batch(batch_du));
    }
    const auto cu = curl6(S.components);
    const auto cdu = curl6(T.components);
    d.curl_u = to_array6(realize_batch({cu.begin(), cu.end()}));
    d.curl_du = to_array6(realize_batch({cdu.begin(), cdu.end()}));
    return d;
}

// (mu/2) sum_w <a_H, b_H> + (eps/2) sum_w <a_E, b_E>, and its Cauchy-Schwarz bound.
struct Weighted {
    double value;
    double bound;
};

inline Weighted energy_pair(const std::array<PhysicalField, 6>& a, const std::array<PhysicalField, 6>& b,
                            double we, double wh) {
    Weighted r{0.0, 0.0};
    for (std::size_t c = 0; c < 6; ++c) {
        const double w = c < 3 ? we : wh;
        r.value += w * inner_product_N(a[c], b[c]);
        r.bound += std::abs(w) * norm_N(a[c]) * norm_N(b[c]);
    }
    return r;
}

}  // namespace detail

/// Energies E1..E6, helicities H1, H2, momenta M1, M2 and divergence norms of a state.
inline InvariantReport invariants(const PhysicalState& s) {
    s.validate();
    const auto d = detail::derive(s);
    const double mu = s.medium.mu, eps = s.medium.eps;
    InvariantReport r;
    r.time = s.time;

    auto e1 = detail::energy_pair(d.u, d.u, eps / 2, mu / 2);
    auto e2 = detail::energy_pair(d.du, d.du, eps / 2, mu / 2);
    r.value.e1 = e1.value;
    r.scale.e1 = e1.bound;
    r.value.e2 = e2.value;
    r.scale.e2 = e2.bound;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto e3 = detail::energy_pair(d.dk_u[k], d.dk_u[k], eps / 2, mu / 2);
        const auto e4 = detail::energy_pair(d.dk_du[k], d.dk_du[k], eps / 2, mu / 2);
        const auto e5 = detail::energy_pair(d.u, d.dk_u[k], eps / 2, mu / 2);
        const auto e6 = detail::energy_pair(d.du, d.dk_du[k], eps / 2, mu / 2);
        r.value.e3[k] = e3.value;
        r.scale.e3[k] = e3.bound;
        r.value.e4[k] = e4.value;
        r.scale.e4[k] = e4.bound;
        r.value.e5[k] = e5.value;
        r.scale.e5[k] = e5.bound;
        r.value.e6[k] = e6.value;
        r.scale.e6[k] = e6.bound;

        // M1 = <H, B_k E>_N, M2 = <E, B_k H>_N
        double m1 = 0, m1b = 0, m2 = 0, m2b = 0;
        for (std::size_t w = 0; w < 3; ++w) {
            m1 += inner_product_N(d.u[3 + w], d.dk_u[k][w]);
            m1b += norm_N(d.u[3 + w]) * norm_N(d.dk_u[k][w]);
            m2 += inner_product_N(d.u[w], d.dk_u[k][3 + w]);
            m2b += norm_N(d.u[w]) * norm_N(d.dk_u[k][3 + w]);
        }
        r.value.m1[k] = m1;
        r.scale.m1[k] = m1b;
        r.value.m2[k] = m2;
        r.scale.m2[k] = m2b;
    }

    // H = (1/2eps) <H, D H>_N + (1/2mu) <E, D E>_N
    const auto h1 = detail::energy_pair(d.u, d.curl_u, 1.0 / (2 * mu), 1.0 / (2 * eps));
    const auto h2 = detail::energy_pair(d.du, d.curl_du, 1.0 / (2 * mu), 1.0 / (2 * eps));
    r.value.h1 = h1.value;
    r.scale.h1 = h1.bound;
    r.value.h2 = h2.value;
    r.scale.h2 = h2.bound;

    const auto div = divergences(s);
    r.div_e_norm = div.div_e_norm;
    r.div_h_norm = div.div_h_norm;
    return r;
}

struct Energies {
    double e1, e2, e3, e4, e5, e6;
};

/// E1..E6 with the axis-indexed ones taken along `axis`.
inline Energies energies(const PhysicalState& s, Axis axis = Axis::x) {
    const auto r = invariants(s);
    const auto k = index_of(axis);
    return {r.value.e1, r.value.e2, r.value.e3[k], r.value.e4[k], r.value.e5[k], r.value.e6[k]};
}

struct Helicities {
    double h1, h2;
};

inline Helicities helicities(const PhysicalState& s) {
    const auto r = invariants(s);
    return {r.value.h1, r.value.h2};
}

struct Momenta {
    double m1, m2;
};

inline Momenta momenta(const PhysicalState& s, Axis axis = Axis::x) {
    const auto r = invariants(s);
    return {r.value.m1[index_of(axis)], r.value.m2[index_of(axis)]};
}

struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    std::array<double, 6> component_max{};
    double cpu_seconds = 0.0;
};

/// L2 = (||E - E(t)||_N^2 + ||H - H(t)||_N^2)^(1/2),  Linf = max pointwise error.
inline ErrorReport error_norms(const PhysicalState& s, const AnalyticCase& c) {
    s.validate();
    const PhysicalState exact = sample(c, s.grid, s.time);
    ErrorReport r;
    double sq = 0.0;
    for (std::size_t q = 0; q < 6; ++q) {
        const auto& a = s.components[q];
        const auto& b = exact.components[q];
        const std::size_t n = a.size();
        sq += detail::pairwise_sum(0, n, [&](std::size_t p) {
                  const double e = a[p] - b[p];
                  return e * e;
              }) /
              static_cast<double>(n);
        double m = 0.0;
        for (std::size_t p = 0; p < n; ++p) m = std::max(m, std::abs(a[p] - b[p]));
        r.component_max[q] = m;
        r.linf = std::max(r.linf, m);
    }
    r.l2 = std::sqrt(sq);
    return r;
}

/// Change of one invariant. `absolute` marks a near-zero invariant whose drift is
/// reported as |after - before| rather than relative to |before|.
struct Drift {
    double value = 0.0;
    bool absolute = false;
};

inline constexpr double kNearZeroThreshold = 1e-14;

/// Relative change |after - before| / |before|. An invariant counts as near zero when
/// |before| < 1e-14 * max(1, bound), with `bound` its Cauchy-Schwarz magnitude; its
/// relative change would only measure roundoff, so the absolute change is returned.
inline Drift relative_change(double before, double after, double bound = 0.0) {
    const double diff = std::abs(after - before);
    if (std::abs(before) < kNearZeroThreshold * std::max(1.0, bound)) return {diff, true};
    return {diff / std::abs(before), false};
}

struct DriftReport {
    InvariantSet<Drift> drift;
    double div_e = 0.0;  // divergence norms of the later report
    double div_h = 0.0;
};

inline DriftReport relative_change(const InvariantReport& before, const InvariantReport& after) {
    DriftReport r;
    auto b_val = before.value;
    auto b_scale = before.scale;
    auto a_val = after.value;
    for_each_invariant([](const std::string&, double b, double bs, double a,
                          Drift& out) { out = relative_change(b, a, bs); },
                       b_val, b_scale, a_val, r.drift);
    r.div_e = after.div_e_norm;
    r.div_h = after.div_h_norm;
    return r;
}

}  // namespace fmx
