// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/channel.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fredkin {
namespace {

constexpr double d = kQubitDim;

// Reference values of this implementation, recorded once and frozen.
constexpr double kResonantFidelity = 0.999996486757;    // Omega_max = 0.05 g, no decay
constexpr double kDispersiveFidelity = 0.998452273091;  // Omega = 0.02 g, no decay

QubitMatrix fixed_unitary(double scale) {
    QubitMatrix A;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) A(r, c) = Complex(std::sin(1.0 + r + 2.0 * c), std::cos(3.0 * r - c));
    }
    const QubitMatrix H = (A + A.adjoint()) * scale;
    return (Complex(0.0, 1.0) * H).exp();
}

// Closed form for a unitary channel V against the ideal U.
double unitary_fidelity(const QubitMatrix& U, const QubitMatrix& V) {
    return (std::norm((U.adjoint() * V).trace()) + d) / (d * (d + 1.0));
}

TEST(Ideal, FredkinSwapsFiveAndSix) {
    const QubitMatrix U = fredkin_ideal();
    EXPECT_EQ(U(5, 6), Complex(1.0));
    EXPECT_EQ(U(6, 5), Complex(1.0));
    EXPECT_EQ(U(5, 5), Complex(0.0));
    EXPECT_EQ(U.trace(), Complex(6.0));
    EXPECT_EQ(U * U, QubitMatrix::Identity());
}

TEST(PauliBasis, OrthogonalAndLabelled) {
    const auto& basis = pauli_tensor_basis();
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const Complex overlap = (basis[i].adjoint() * basis[j]).trace();
            EXPECT_NEAR(std::abs(overlap - (i == j ? d : 0.0)), 0.0, 1e-14);
        }
    }
    EXPECT_EQ(pauli_label(0), "III");
    EXPECT_EQ(pauli_label(16 * 1 + 4 * 2 + 3), "XYZ");
    EXPECT_THROW(pauli_label(64), std::out_of_range);
    // X on the control (index bit 2) flips q2.
    EXPECT_EQ(basis[16](4, 0), Complex(1.0));
}

TEST(Fidelity, IdealChannelIsExactlyOne) {
    const auto U = fredkin_ideal();
    const auto report = average_gate_fidelity(QuantumChannel::unitary(U), U);
    EXPECT_NEAR(report.fidelity, 1.0, 1e-15);
    EXPECT_FALSE(report.imaginary_flag);
}

TEST(Fidelity, DepolarizingMapIsOneEighth) {
    const auto depolarize =
        QuantumChannel::from_map([](const QubitMatrix& A) { return QubitMatrix(A.trace() / d * QubitMatrix::Identity()); });
    EXPECT_NEAR(average_gate_fidelity(depolarize, fredkin_ideal()).fidelity, 0.125, 1e-15);
}

TEST(Fidelity, IdentityMapAgainstFredkin) {
    // |tr U|^2 = 36: (36 + 8) / 72.
    EXPECT_NEAR(average_gate_fidelity(QuantumChannel::identity(), fredkin_ideal()).fidelity, 44.0 / 72.0, 1e-15);
}

TEST(Fidelity, UnitaryChannelsMatchClosedForm) {
    const auto U = fredkin_ideal();
    for (const double scale : {0.01, 0.1, 0.5}) {
        const QubitMatrix V = fixed_unitary(scale);
        EXPECT_NEAR(average_gate_fidelity(QuantumChannel::unitary(V), U).fidelity, unitary_fidelity(U, V), 1e-13);
    }
}

TEST(Fidelity, ZeroChannelIsOneNinth) {
    // Only the d^2 offset survives: 64 / 576.
    EXPECT_NEAR(average_gate_fidelity(QuantumChannel(), fredkin_ideal()).fidelity, 1.0 / 9.0, 1e-15);
}

TEST(Fidelity, ProcessConversion) {
    EXPECT_NEAR(process_fidelity(fredkin_ideal(), fredkin_ideal()), 1.0, 1e-15);
    EXPECT_NEAR(average_from_process(1.0), 1.0, 1e-15);
    EXPECT_NEAR(average_from_process(0.0), 1.0 / 9.0, 1e-15);
}

TEST(Channel, ApplyAndChoi) {
    const QubitMatrix V = fixed_unitary(0.2);
    const auto ch = QuantumChannel::unitary(V);
    const QubitMatrix A = fixed_unitary(0.3);
    EXPECT_LT((ch.apply(A) - V * A * V.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 64, 64>> solver(ch.choi());
    EXPECT_NEAR(solver.eigenvalues()(63), d, 1e-12);
    EXPECT_NEAR(solver.eigenvalues()(62), 0.0, 1e-12);
}

class GateRun : public ::testing::Test {
protected:
    static const ChannelResult& resonant() {
        static const ChannelResult r = reconstruct_channel(resonant_setup(0.05));
        return r;
    }
};

TEST_F(GateRun, ResonantFrozenFidelity) {
    const auto& r = resonant();
    EXPECT_TRUE(r.unitary_path);
    EXPECT_NEAR(average_gate_fidelity(r.channel, fredkin_ideal()).fidelity, kResonantFidelity, 1e-10);
    EXPECT_LT(r.leakage, 1e-4);
    EXPECT_LT(r.trace_drift, 1e-10);
}

TEST(Gate, DispersiveFrozenFidelity) {
    const auto r = reconstruct_channel(dispersive_setup(0.02));
    EXPECT_NEAR(average_gate_fidelity(r.channel, fredkin_ideal()).fidelity, kDispersiveFidelity, 1e-10);
}

TEST_F(GateRun, KrausIdentity) {
    const auto& r = resonant();
    const auto U = fredkin_ideal();
    double sum = 0.0;
    for (const auto& K : cavity_kraus(*r.space, *r.final_kets)) sum += std::norm((U.adjoint() * K).trace());
    const double kraus = (sum + d) / (d * (d + 1.0));
    EXPECT_NEAR(average_gate_fidelity(r.channel, U).fidelity, kraus, 1e-13);
}

TEST_F(GateRun, ProcessFidelityCrossCheck) {
    const auto& r = resonant();
    const auto M = vacuum_block(*r.space, *r.final_kets);
    const double via_process = average_from_process(process_fidelity(M, fredkin_ideal()));
    // The two agree up to the leaked weight.
    EXPECT_NEAR(via_process, average_gate_fidelity(r.channel, fredkin_ideal()).fidelity, 2.0 * r.leakage + 1e-12);
}

TEST_F(GateRun, GlobalPhaseInvariance) {
    const auto& r = resonant();
    const DenseMatrix shifted = *r.final_kets * std::polar(1.0, 0.7);
    const auto ch = channel_from_kets(*r.space, shifted);
    EXPECT_NEAR(average_gate_fidelity(ch, fredkin_ideal()).fidelity,
                average_gate_fidelity(r.channel, fredkin_ideal()).fidelity, 1e-14);
}

TEST(Gate, DensityPathMatchesKetPathWithoutDecay) {
    auto setup = resonant_setup(0.1);
    const auto kets = reconstruct_channel(setup);
    setup.force_density = true;
    const auto dens = reconstruct_channel(setup);
    EXPECT_FALSE(dens.unitary_path);
    double worst = 0.0;
    for (int m = 0; m < 8; ++m) {
        for (int n = 0; n < 8; ++n) worst = std::max(worst, (kets.channel.image(m, n) - dens.channel.image(m, n)).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_NEAR(kets.leakage, dens.leakage, 1e-10);
}

TEST(Gate, DissipativeChannelIsCompletelyPositive) {
    const auto r = reconstruct_channel(resonant_setup(0.1, {0.01, 0.01}));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 64, 64>> solver(r.channel.choi());
    EXPECT_GT(solver.eigenvalues().minCoeff(), -1e-10);
    // Extraction discards leaked weight, so the trace can only shrink.
    EXPECT_LE(solver.eigenvalues().sum(), d + 1e-10);
    const auto report = average_gate_fidelity(r.channel, fredkin_ideal());
    EXPECT_FALSE(report.imaginary_flag);
    EXPECT_LT(r.trace_drift, 1e-6);
}

TEST(Gate, FidelityFallsWithCavityDecay) {
    double previous = 1.0;
    for (const double kappa : {0.0, 0.005, 0.01}) {
        const auto r = reconstruct_channel(resonant_setup(0.1, {kappa, 0.0}));
        const double f = average_gate_fidelity(r.channel, fredkin_ideal()).fidelity;
        EXPECT_LT(f, previous);
        previous = f;
    }
}

TEST(Gate, TruncationChoicesAgree) {
    auto setup = resonant_setup(0.1);
    // Larger caps admit two-photon states with a larger norm bound, so every run uses the finer step.
    setup.evolve.dt = 0.005;
    const double sector = average_gate_fidelity(reconstruct_channel(setup).channel, fredkin_ideal()).fidelity;
    setup.fock_cap = 3;
    setup.sector_cap = 3;
    const double wider = average_gate_fidelity(reconstruct_channel(setup).channel, fredkin_ideal()).fidelity;
    setup.fock_cap = 2;
    setup.sector_cap.reset();
    const double full = average_gate_fidelity(reconstruct_channel(setup).channel, fredkin_ideal()).fidelity;
    EXPECT_NEAR(sector, wider, 1e-10);
    EXPECT_NEAR(sector, full, 1e-8);
}

TEST(Gate, SchemeParsing) {
    EXPECT_EQ(parse_scheme("dispersive"), Scheme::Dispersive);
    EXPECT_EQ(to_string(Scheme::Resonant), "resonant");
    EXPECT_THROW(parse_scheme("adiabatic"), std::invalid_argument);
}

}  // namespace
}  // namespace fredkin
