#pragma once

// Dense, slow reference implementations for tests. Nothing here touches the
// spectral or propagator modules; only the grid and field containers are shared.
//
// Dense vectors over the grid use the flat index p = Nx*Ny*l + Nx*k + j. Stacked
// 3-vector fields place component blocks of size N_S one after another.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fmx/errors.hpp"
#include "fmx/field.hpp"
#include "fmx/grid.hpp"

namespace fmx::oracle {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kMaxDiffN = 16;
inline constexpr int kMaxDenseN = 8;

namespace detail {

inline void guard(const GridSpec& g, int limit, const char* what) {
    for (Axis a : kAxes)
        if (g.n(a) > static_cast<std::size_t>(limit))
            throw InvalidArgument(std::string(what) + ": N_" + std::string(axis_name(a)) + " = " +
                                  std::to_string(g.n(a)) + " exceeds oracle limit " + std::to_string(limit));
}

inline int coord(const GridSpec& g, std::size_t p, Axis a) {
    const auto idx = g.unflatten(p);
    return static_cast<int>(a == Axis::x ? idx.j : a == Axis::y ? idx.k : idx.l);
}

inline double integer_wavenumber(int m, int n) {
    if (2 * m == n) return 0.0;
    return m < n / 2 ? m : m - n;
}

}  // namespace detail

/// (D_w)_{jl} = (nu/2) (-1)^{j+l} cot(nu (w_j - w_l) / 2) for j != l, zero diagonal.
inline RealMatrix dense_diff_matrix(const GridSpec& g, Axis a) {
    const int n = static_cast<int>(g.n(a));
    if (n > kMaxDiffN)
        throw InvalidArgument("dense_diff_matrix: N = " + std::to_string(n) + " exceeds oracle limit " +
                              std::to_string(kMaxDiffN));
    const double nu = 2.0 * std::numbers::pi / g.domain().length(a);
    const double h = g.domain().length(a) / n;
    RealMatrix d = RealMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            const double sign = (j + l) % 2 == 0 ? 1.0 : -1.0;
            const double arg = nu * (j - l) * h / 2.0;
            d(j, l) = 0.5 * nu * sign * std::cos(arg) / std::sin(arg);
        }
    return d;
}

/// 1-D DFT matrix F_{jk} = exp(-2 pi i jk / N) and its inverse (1/N) exp(+2 pi i jk / N).
inline ComplexMatrix dft_matrix(int n) {
    ComplexMatrix f(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) f(j, k) = std::polar(1.0, -2.0 * std::numbers::pi * ((j * k) % n) / n);
    return f;
}

inline ComplexMatrix idft_matrix(int n) {
    ComplexMatrix f(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) f(j, k) = std::polar(1.0 / n, 2.0 * std::numbers::pi * ((j * k) % n) / n);
    return f;
}

/// Lambda_w = i * nu * diag(0, 1, ..., N/2-1, 0, -N/2+1, ..., -1), built from integers.
inline ComplexMatrix lambda_1d(const GridSpec& g, Axis a) {
    const int n = static_cast<int>(g.n(a));
    const double nu = 2.0 * std::numbers::pi / g.domain().length(a);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = {0.0, nu * detail::integer_wavenumber(i, n)};
    return m;
}

/// Lifts a 1-D operator on axis `a` to the full grid (identity on the other axes).
template <class Matrix>
Matrix lift_axis(const GridSpec& g, Axis a, const Matrix& op1d) {
    const auto ns = static_cast<Eigen::Index>(g.size());
    Matrix m = Matrix::Zero(ns, ns);
    for (Eigen::Index p = 0; p < ns; ++p)
        for (Eigen::Index q = 0; q < ns; ++q) {
            bool same = true;
            for (Axis b : kAxes)
                if (b != a && detail::coord(g, p, b) != detail::coord(g, q, b)) same = false;
            if (same) m(p, q) = op1d(detail::coord(g, p, a), detail::coord(g, q, a));
        }
    return m;
}

/// D_k on the whole grid: Kronecker lift of the cotangent matrix.
inline RealMatrix dense_axis_derivative(const GridSpec& g, Axis a) {
    detail::guard(g, kMaxDenseN, "dense_axis_derivative");
    return lift_axis(g, a, dense_diff_matrix(g, a));
}

/// Block-diagonal diag(D_k, D_k, D_k) acting on a stacked 3-vector.
inline RealMatrix dense_block_derivative(const GridSpec& g, Axis a) {
    const RealMatrix d = dense_axis_derivative(g, a);
    const auto ns = d.rows();
    RealMatrix b = RealMatrix::Zero(3 * ns, 3 * ns);
    for (int w = 0; w < 3; ++w) b.block(w * ns, w * ns, ns, ns) = d;
    return b;
}

namespace detail {

template <class Matrix>
Matrix curl_blocks(const Matrix& d1, const Matrix& d2, const Matrix& d3) {
    const auto ns = d1.rows();
    Matrix c = Matrix::Zero(3 * ns, 3 * ns);
    c.block(0, ns, ns, ns) = -d3;
    c.block(0, 2 * ns, ns, ns) = d2;
    c.block(ns, 0, ns, ns) = d3;
    c.block(ns, 2 * ns, ns, ns) = -d1;
    c.block(2 * ns, 0, ns, ns) = -d2;
    c.block(2 * ns, ns, ns, ns) = d1;
    return c;
}

}  // namespace detail

/// The curl operator D = [[0, -D_3, D_2], [D_3, 0, -D_1], [-D_2, D_1, 0]] on 3N_S unknowns.
inline RealMatrix dense_curl(const GridSpec& g) {
    detail::guard(g, kMaxDenseN, "dense_curl");
    return detail::curl_blocks(dense_axis_derivative(g, Axis::x), dense_axis_derivative(g, Axis::y),
                               dense_axis_derivative(g, Axis::z));
}

/// Spectral counterpart Lambda: the same block layout with diagonal blocks i * Omega_w.
inline ComplexMatrix dense_lambda(const GridSpec& g) {
    detail::guard(g, kMaxDenseN, "dense_lambda");
    return detail::curl_blocks(lift_axis(g, Axis::x, lambda_1d(g, Axis::x)),
                               lift_axis(g, Axis::y, lambda_1d(g, Axis::y)),
                               lift_axis(g, Axis::z, lambda_1d(g, Axis::z)));
}

/// Generator (1/sqrt(mu eps)) [[0, -Lambda], [Lambda, 0]] acting on (sqrt(mu) H^, sqrt(eps) E^).
inline ComplexMatrix dense_spectral_generator(const GridSpec& g, double mu, double eps) {
    const ComplexMatrix lam = dense_lambda(g) / std::sqrt(mu * eps);
    const auto m = lam.rows();
    ComplexMatrix a = ComplexMatrix::Zero(2 * m, 2 * m);
    a.block(0, m, m, m) = -lam;
    a.block(m, 0, m, m) = lam;
    return a;
}

/// Generator [[0, D/eps], [-D/mu, 0]] of the semi-discrete system in (E, H) order.
inline RealMatrix dense_physical_generator(const GridSpec& g, double mu, double eps) {
    const RealMatrix d = dense_curl(g);
    const auto m = d.rows();
    RealMatrix a = RealMatrix::Zero(2 * m, 2 * m);
    a.block(0, m, m, m) = d / eps;
    a.block(m, 0, m, m) = -d / mu;
    return a;
}

/// exp(tA) by scaling and squaring: X = tA / 2^s with ||X||_1 <= 1/2, then the Taylor
/// series summed until a term drops below 1e-18 of the partial sum. With ||X|| <= 1/2
/// the neglected tail is bounded by that last term, so the truncation error sits well
/// under double precision before squaring.
template <class Derived>
typename Derived::PlainObject dense_expm(const Eigen::MatrixBase<Derived>& a, double t) {
    using Matrix = typename Derived::PlainObject;
    if (a.rows() != a.cols()) throw InvalidArgument("dense_expm: matrix is not square");
    if (!std::isfinite(t)) throw InvalidArgument("dense_expm: t is not finite");
    constexpr int kMaxTerms = 100;
    Matrix x = a * t;
    const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    x /= std::ldexp(1.0, s);

    const auto n = a.rows();
    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    bool converged = false;
    for (int k = 1; k <= kMaxTerms; ++k) {
        term = (term * x) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) {
            converged = true;
            break;
        }
    }
    if (!converged) throw Error("dense_expm: series did not converge in " + std::to_string(kMaxTerms) + " terms");
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

/// Direct triple sum F^(j',k',l') = sum_p f_p exp(-2 pi i (j j'/Nx + k k'/Ny + l l'/Nz)).
template <class Scalar>
SpectralField naive_dft3(const Field<Scalar, Space::physical>& f) {
    const GridSpec& g = f.grid();
    detail::guard(g, kMaxDenseN, "naive_dft3");
    const int nx = static_cast<int>(g.nx()), ny = static_cast<int>(g.ny()), nz = static_cast<int>(g.nz());
    SpectralField out(f.grid_ptr());
    for (int l2 = 0; l2 < nz; ++l2)
        for (int k2 = 0; k2 < ny; ++k2)
            for (int j2 = 0; j2 < nx; ++j2) {
                cplx acc = 0.0;
                for (int l = 0; l < nz; ++l)
                    for (int k = 0; k < ny; ++k)
                        for (int j = 0; j < nx; ++j) {
                            const double phase = static_cast<double>((j * j2) % nx) / nx +
                                                 static_cast<double>((k * k2) % ny) / ny +
                                                 static_cast<double>((l * l2) % nz) / nz;
                            acc += cplx(f(j, k, l)) * std::polar(1.0, -2.0 * std::numbers::pi * phase);
                        }
                out(j2, k2, l2) = acc;
            }
    return out;
}

/// Inverse of naive_dft3, including the 1/N_S factor.
inline ComplexPhysicalField naive_idft3(const SpectralField& f) {
    const GridSpec& g = f.grid();
    detail::guard(g, kMaxDenseN, "naive_idft3");
    const int nx = static_cast<int>(g.nx()), ny = static_cast<int>(g.ny()), nz = static_cast<int>(g.nz());
    const double inv = 1.0 / static_cast<double>(g.size());
    ComplexPhysicalField out(f.grid_ptr());
    for (int l = 0; l < nz; ++l)
        for (int k = 0; k < ny; ++k)
            for (int j = 0; j < nx; ++j) {
                cplx acc = 0.0;
                for (int l2 = 0; l2 < nz; ++l2)
                    for (int k2 = 0; k2 < ny; ++k2)
                        for (int j2 = 0; j2 < nx; ++j2) {
                            const double phase = static_cast<double>((j * j2) % nx) / nx +
                                                 static_cast<double>((k * k2) % ny) / ny +
                                                 static_cast<double>((l * l2) % nz) / nz;
                            acc += f(j2, k2, l2) * std::polar(1.0, 2.0 * std::numbers::pi * phase);
                        }
                out(j, k, l) = acc * inv;
            }
    return out;
}

/// Column i of the result is apply(e_i): the dense matrix of a linear map on R^n.
inline RealMatrix assemble_matrix(Eigen::Index n, const std::function<RealVector(const RealVector&)>& apply) {
    RealMatrix m(n, n);
    RealVector e = RealVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        e[i] = 1.0;
        const RealVector col = apply(e);
        if (col.size() != n) throw Mismatch("assemble_matrix: map changed the dimension");
        m.col(i) = col;
        e[i] = 0.0;
    }
    return m;
}

/// Standard symplectic form J = [[0, I], [-I, 0]] of size 2m.
inline RealMatrix symplectic_form(Eigen::Index m) {
    RealMatrix j = RealMatrix::Zero(2 * m, 2 * m);
    j.block(0, m, m, m) = RealMatrix::Identity(m, m);
    j.block(m, 0, m, m) = -RealMatrix::Identity(m, m);
    return j;
}

}  // namespace fmx::oracle
