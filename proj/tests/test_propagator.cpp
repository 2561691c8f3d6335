#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fmx/oracle.hpp"
#include "support.hpp"

using namespace fmx;

namespace {

constexpr double pi = std::numbers::pi;

using Mat3 = Eigen::Matrix3cd;

Mat3 c_block(const PropagatorCoefficients& pc, std::size_t p) {
    Mat3 c;
    c << pc.c11[p], pc.c12[p], pc.c13[p], pc.c12[p], pc.c22[p], pc.c23[p], pc.c13[p], pc.c23[p], pc.c33[p];
    return c;
}

Mat3 s_block(const PropagatorCoefficients& pc, std::size_t p) {
    const cplx I(0.0, 1.0);
    const cplx s12 = I * pc.s12[p], s13 = I * pc.s13[p], s23 = I * pc.s23[p];
    Mat3 s;
    s << 0.0, -s12, s13, s12, 0.0, -s23, -s13, s23, 0.0;
    return s;
}

double weighted_norm2(const SpectralState& s) {
    double e = 0.0, h = 0.0;
    for (Axis a : kAxes)
        for (std::size_t p = 0; p < s.grid->size(); ++p) {
            e += std::norm(s.e(a)[p]);
            h += std::norm(s.h(a)[p]);
        }
    return s.medium.mu * h + s.medium.eps * e;
}

}  // namespace

TEST(Propagator, ZeroTimeCoefficientsAreIdentity) {
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const auto pc = build_coefficients(g, {2.0, 3.0}, 0.0);
    for (std::size_t p = 0; p < g->size(); ++p) {
        EXPECT_EQ(pc.r1[p], -0.5);
        EXPECT_EQ(pc.r2[p], 1.0);
        EXPECT_EQ(pc.c11[p], 1.0);
        EXPECT_EQ(pc.c22[p], 1.0);
        EXPECT_EQ(pc.c33[p], 1.0);
        EXPECT_EQ(pc.c12[p], 0.0);
        EXPECT_EQ(pc.c13[p], 0.0);
        EXPECT_EQ(pc.c23[p], 0.0);
        EXPECT_EQ(pc.s12[p], 0.0);
        EXPECT_EQ(pc.s13[p], 0.0);
        EXPECT_EQ(pc.s23[p], 0.0);
    }
}

TEST(Propagator, HalfTurnMode) {
    // b = (1, 0, 0) with kappa = pi: theta = pi
    const auto g = build_grid(DomainSpec::cube(0.0, 2 * pi), 4);
    const auto pc = build_coefficients(g, {}, pi);
    const auto p = g->flatten(1, 0, 0);
    EXPECT_NEAR(pc.r2[p], 0.0, 1e-15);
    EXPECT_NEAR(pc.r1[p], -2.0 / (pi * pi), 1e-15);
    EXPECT_NEAR(pc.s12[p], 0.0, 1e-15);
    EXPECT_NEAR(pc.s13[p], 0.0, 1e-15);
    EXPECT_NEAR(pc.s23[p], 0.0, 1e-15);
    EXPECT_NEAR(pc.c11[p], 1.0, 1e-15);
    EXPECT_NEAR(pc.c22[p], -1.0, 1e-15);
    EXPECT_NEAR(pc.c33[p], -1.0, 1e-15);
}

TEST(Propagator, PsiNonNegativeAndZeroModes) {
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const auto pc = build_coefficients(g, {}, 0.37);
    int zero = 0;
    for (std::size_t p = 0; p < g->size(); ++p) {
        EXPECT_GE(pc.psi[p], 0.0);
        zero += pc.psi[p] == 0.0;
    }
    EXPECT_EQ(zero, 8);
}

TEST(Propagator, SmallThetaKeepsRelativeAccuracy) {
    const auto g = build_grid(DomainSpec::cube(0.0, 2 * pi), 4);
    const auto pc = build_coefficients(g, {}, 1e-9);
    const auto p = g->flatten(1, 0, 0);
    // (cos x - 1)/x^2 = -1/2 + x^2/24
    EXPECT_NEAR(pc.r1[p], -0.5, 1e-17);
    EXPECT_NEAR(pc.r2[p], 1.0, 1e-17);
}

TEST(Propagator, BroadcastLayout) {
    const auto g = build_grid(DomainSpec::cube(0.0, 2 * pi), 4);
    const auto b = broadcast_wavenumbers(*g);
    const double ladder[4] = {0.0, 1.0, 0.0, -1.0};
    for (std::size_t p = 0; p < g->size(); ++p) EXPECT_NEAR(b.bx[p], ladder[p % 4], 1e-15);
    for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t q = 0; q < 16; ++q) EXPECT_EQ(b.bz[16 * l + q], b.bz[16 * l]);

    double sum = 0.0, brute = 0.0;
    for (std::size_t p = 0; p < g->size(); ++p) sum += b.bx[p] * b.bx[p] + b.by[p] * b.by[p] + b.bz[p] * b.bz[p];
    const auto kx = g->wavenumbers(Axis::x), ky = g->wavenumbers(Axis::y), kz = g->wavenumbers(Axis::z);
    for (double c : kz)
        for (double bb : ky)
            for (double a : kx) brute += a * a + bb * bb + c * c;
    EXPECT_DOUBLE_EQ(sum, brute);
}

TEST(Propagator, CoefficientsMatchSeriesCosSin) {
    const auto g = build_grid(DomainSpec{0, 1, 0, 2, 0, 1.5}, 4);
    const double kappa = 0.7;
    const auto pc = build_coefficients(g, {}, kappa);
    // exp(kappa * [[0, -L], [L, 0]]) = [[cos, -sin], [sin, cos]] of kappa * Lambda
    const auto big = oracle::dense_expm(oracle::dense_spectral_generator(*g, 1.0, 1.0), kappa);
    const auto ns = static_cast<Eigen::Index>(g->size());
    const auto m = 3 * ns;
    const Eigen::MatrixXcd cos_blk = big.block(0, 0, m, m);
    const Eigen::MatrixXcd sin_blk = big.block(m, 0, m, m);
    EXPECT_LE((big.block(0, m, m, m) + sin_blk).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((big.block(m, m, m, m) - cos_blk).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::MatrixXcd c_expect = Eigen::MatrixXcd::Zero(m, m), s_expect = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index p = 0; p < ns; ++p) {
        const auto c = c_block(pc, static_cast<std::size_t>(p));
        const auto s = s_block(pc, static_cast<std::size_t>(p));
        for (int u = 0; u < 3; ++u)
            for (int w = 0; w < 3; ++w) {
                c_expect(u * ns + p, w * ns + p) = c(u, w);
                s_expect(u * ns + p, w * ns + p) = s(u, w);
            }
    }
    EXPECT_LE((cos_blk - c_expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((sin_blk - s_expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, StepMatchesDenseExpm) {
    std::mt19937_64 rng(21);
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 4);
    const MediumParams medium{2.0, 0.5};
    const double t = 0.3;
    const auto expm = oracle::dense_expm(oracle::dense_spectral_generator(*g, medium.mu, medium.eps), t);
    const auto pc = build_coefficients(g, medium, t);
    const auto ns = static_cast<Eigen::Index>(g->size());
    const double smu = std::sqrt(medium.mu), seps = std::sqrt(medium.eps);
    for (int trial = 0; trial < 3; ++trial) {
        const auto S = to_spectral(test::random_state(g, medium, rng));
        Eigen::VectorXcd v(6 * ns);
        for (Eigen::Index w = 0; w < 3; ++w)
            for (Eigen::Index p = 0; p < ns; ++p) {
                v[w * ns + p] = smu * S.components[3 + w][p];
                v[(3 + w) * ns + p] = seps * S.components[w][p];
            }
        const Eigen::VectorXcd expect = expm * v;
        const auto got = step(S, pc);
        EXPECT_DOUBLE_EQ(got.time, t);
        double err = 0.0;
        for (Eigen::Index w = 0; w < 3; ++w)
            for (Eigen::Index p = 0; p < ns; ++p) {
                err = std::max(err, std::abs(smu * got.components[3 + w][p] - expect[w * ns + p]));
                err = std::max(err, std::abs(seps * got.components[w][p] - expect[(3 + w) * ns + p]));
            }
        EXPECT_LE(err, 1e-11 * expect.cwiseAbs().maxCoeff());
    }
}

TEST(Propagator, ZeroTimeIsExactIdentity) {
    std::mt19937_64 rng(22);
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const auto s = test::random_state(g, {1.5, 0.7}, rng);
    const auto out = propagate(s, 0.0);
    for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t p = 0; p < g->size(); ++p) ASSERT_EQ(out.components[c][p], s.components[c][p]);

    const auto S = to_spectral(s);
    const auto S0 = step(S, build_coefficients(g, s.medium, 0.0));
    for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t p = 0; p < g->size(); ++p) ASSERT_EQ(S0.components[c][p], S.components[c][p]);
}

TEST(Propagator, ZeroFieldsStayZero) {
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const auto out = propagate(PhysicalState::zeros(g, {}), 12.5);
    EXPECT_EQ(max_abs(out), 0.0);
    EXPECT_DOUBLE_EQ(out.time, 12.5);
}

TEST(Propagator, StandingWaveAtTimeOne) {
    const auto c = AnalyticCase::standing();
    const auto g = build_grid(c.default_domain(), 8);
    const auto out = propagate(sample_initial(c, g), 1.0);
    EXPECT_LE(test::max_abs_diff(out, sample(c, g, 1.0)), 1e-10);
}

TEST(Propagator, TravelingWaveAtTimeTen) {
    const auto c = AnalyticCase::traveling();
    const auto g = build_grid(c.default_domain(), 16);
    const auto out = propagate(sample_initial(c, g), 10.0);
    EXPECT_LE(test::max_abs_diff(out, sample(c, g, 10.0)), 1e-8);
}

TEST(Propagator, GroupPropertyAndReversibility) {
    std::mt19937_64 rng(23);
    const auto g = build_grid(DomainSpec{0, 1, 0, 2, -1, 1}, 8);
    const MediumParams m{1.3, 0.8};
    const auto s = test::random_state(g, m, rng);
    const double scale = max_abs(s);
    const auto two = propagate(propagate(s, 0.7), 2.15);
    const auto one = propagate(s, 2.85);
    EXPECT_LE(test::max_abs_diff(two, one), 1e-11 * scale);
    EXPECT_DOUBLE_EQ(two.time, 2.85);

    const auto back = propagate(propagate(s, 3.3), -3.3);
    EXPECT_LE(test::max_abs_diff(back, s), 1e-12 * scale);
}

TEST(Propagator, Unitarity) {
    std::mt19937_64 rng(24);
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const MediumParams m{2.5, 0.4};
    const auto S = to_spectral(test::random_state(g, m, rng));
    const double before = weighted_norm2(S);
    for (double t : {0.1, 1.0, 10.0, 1000.0}) {
        const double after = weighted_norm2(step(S, build_coefficients(g, m, t)));
        EXPECT_LE(std::abs(after - before), 1e-13 * before) << "t=" << t;
    }
}

TEST(Propagator, PerModeBlockIsUnitary) {
    // Block [[C, -S], [S, C]] with S purely imaginary: unitarity uses the Hermitian adjoint.
    const auto g = build_grid(DomainSpec{0, 1, 0, 2, 0, 3}, 4);
    for (double t : {0.3, 2.0, -7.5}) {
        const auto pc = build_coefficients(g, {}, t);
        for (std::size_t p = 0; p < g->size(); ++p) {
            const Mat3 c = c_block(pc, p), s = s_block(pc, p);
            const Mat3 id = c.adjoint() * c + s.adjoint() * s;
            EXPECT_LE((id - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_LE((c.adjoint() * s - s.adjoint() * c).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Propagator, DivergenceIdentities) {
    const auto g = build_grid(DomainSpec{0, 1, 0, 2, 0, 0.5}, 8);
    for (double t : {0.3, 4.0}) {
        const auto pc = build_coefficients(g, {}, t);
        double bmax = 0.0;
        for (std::size_t p = 0; p < g->size(); ++p)
            bmax = std::max({bmax, std::abs(pc.b.bx[p]), std::abs(pc.b.by[p]), std::abs(pc.b.bz[p])});
        double worst = 0.0;
        for (std::size_t p = 0; p < g->size(); ++p) {
            const double bx = pc.b.bx[p], by = pc.b.by[p], bz = pc.b.bz[p];
            worst = std::max({worst, std::abs(bx * pc.c11[p] + by * pc.c12[p] + bz * pc.c13[p] - bx),
                              std::abs(bx * pc.c12[p] + by * pc.c22[p] + bz * pc.c23[p] - by),
                              std::abs(bx * pc.c13[p] + by * pc.c23[p] + bz * pc.c33[p] - bz),
                              std::abs(-bx * pc.s12[p] + bz * pc.s23[p]), std::abs(by * pc.s12[p] - bz * pc.s13[p]),
                              std::abs(bx * pc.s13[p] - by * pc.s23[p])});
        }
        EXPECT_LE(worst / bmax, 1e-13) << "t=" << t;
    }
}

TEST(Propagator, RealInputStaysReal) {
    std::mt19937_64 rng(25);
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    const auto s = test::random_state(g, {}, rng);
    const auto r = realize_state(step(to_spectral(s), build_coefficients(g, {}, 5.0)));
    EXPECT_TRUE(r.ok);
    EXPECT_LE(r.max_imag, 1e-12 * max_abs(r.state));
}

TEST(Propagator, Symplectic) {
    const auto g = build_grid(DomainSpec::cube(0.0, 1.0), 4);
    const MediumParams m{1.0, 1.0};
    const auto pc = build_coefficients(g, m, 0.9);
    const auto n = static_cast<Eigen::Index>(6 * g->size());
    const auto M = oracle::assemble_matrix(
        n, [&](const Eigen::VectorXd& v) { return test::pack(propagate(test::unpack(v, g, m), pc)); });
    const auto J = oracle::symplectic_form(n / 2);
    EXPECT_LE((M.transpose() * J * M - J).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagator, Errors) {
    const auto g4 = build_grid(DomainSpec::cube(0.0, 1.0), 4);
    const auto g8 = build_grid(DomainSpec::cube(0.0, 1.0), 8);
    EXPECT_THROW(build_coefficients(g4, {}, NAN), InvalidArgument);
    EXPECT_THROW(build_coefficients(g4, {}, INFINITY), InvalidArgument);
    EXPECT_THROW(build_coefficients(g4, {-1.0, 1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(build_coefficients(g4, {1.0, NAN}, 1.0), InvalidArgument);

    const auto s4 = to_spectral(PhysicalState::zeros(g4, {}));
    EXPECT_THROW(step(s4, build_coefficients(g8, {}, 1.0)), Mismatch);
    EXPECT_THROW(step(s4, build_coefficients(g4, {2.0, 1.0}, 1.0)), Mismatch);
    EXPECT_THROW(propagate(PhysicalState::zeros(g4, {}), build_coefficients(g8, {}, 0.0)), Mismatch);
}
