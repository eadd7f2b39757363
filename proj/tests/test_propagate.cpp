// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/propagate.hpp"
#include "block_lindblad.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fredkin {
namespace {

using testing::max_abs;

const PhysParams kResonant{1.0, 1.0, 0.0};
const PhysParams kDispersive{1.0, 1.0, 1.0};

StateVector superposition(const HilbertSpace& space) {
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    for (int q = 0; q < 8; ++q) psi += Complex(1.0 + 0.1 * q, 0.05 * q) * qubit_embedding(space, q);
    return psi.normalized();
}

TEST(Decay, JumpOperatorOrderAndRates) {
    const auto space = build_space(2, 2);
    EXPECT_EQ(jump_operators(space, {0.1, 0.2}).size(), 9u);
    EXPECT_EQ(jump_operators(space, {0.1, 0.0}).size(), 3u);
    EXPECT_EQ(jump_operators(space, {0.0, 0.2}).size(), 6u);
    EXPECT_TRUE(jump_operators(space, {}).empty());
    const auto jumps = jump_operators(space, {0.1, 0.2});
    EXPECT_LT(max_abs(jumps[0].dense() - std::sqrt(0.1) * cavity_lowering(space, 1).dense()), 1e-15);
    EXPECT_LT(max_abs(jumps[3].dense() - std::sqrt(0.1) * atom_transition(space, 1, Level::Excited, Level::Zero).dense()),
              1e-15);
    EXPECT_LT(max_abs(jumps[4].dense() - std::sqrt(0.1) * atom_transition(space, 2, Level::Excited, Level::Zero).dense()),
              1e-15);
    EXPECT_LT(max_abs(jumps[6].dense() - std::sqrt(0.1) * atom_transition(space, 1, Level::Excited, Level::One).dense()),
              1e-15);
    EXPECT_THROW((DecayParams{-0.1, 0.0}.validate()), std::invalid_argument);
}

TEST(Hamiltonian, NormScaleBoundsTheSpectralNorm) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const double T = resonant_gate_time(0.1);
    for (double t = 0.0; t <= T; t += T / 7) {
        const double norm = h.at(t).dense().jacobiSvd().singularValues()(0);
        EXPECT_LE(norm, h.norm_scale() + 1e-12);
    }
    EXPECT_FALSE(h.is_constant());
    EXPECT_TRUE(gate_hamiltonian(space, kDispersive, DriveSchedule::dispersive(0.1, 1.0)).is_constant());
}

TEST(Kets, TwoLevelRabiOscillation) {
    const auto space = build_space(2, 2);
    const double omega = 0.1;
    TimeDependentHamiltonian h(SparseOperator::zero(space));
    h.add_term(drive_coupling(space, 1), [omega](double) { return omega; }, omega, true);
    const auto traj = evolve_state(h, qubit_embedding(space, 2), 40.0, {.dt = 0.01, .samples = 41});
    const auto ground = static_cast<Eigen::Index>(*space.index_of(make_label("100", "000")));
    const auto excited = static_cast<Eigen::Index>(*space.index_of(make_label("e00", "000")));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double c = std::cos(omega * traj.times[k]);
        EXPECT_NEAR(std::norm(traj.states[k](ground)), c * c, 1e-10);
        EXPECT_NEAR(std::norm(traj.states[k](excited)), 1.0 - c * c, 1e-10);
    }
}

TEST(Kets, NormPreservedOverResonantGate) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.05));
    const auto traj = evolve_state(h, superposition(space), resonant_gate_time(0.05));
    ASSERT_EQ(traj.states.size(), 500u);
    EXPECT_DOUBLE_EQ(traj.times.back(), resonant_gate_time(0.05));
    for (const auto& psi : traj.states) EXPECT_NEAR(psi.squaredNorm(), 1.0, 1e-6);
}

TEST(Kets, Rk4MatchesMatrixExponential) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kDispersive, DriveSchedule::dispersive(0.1, 1.0));
    const StateVector psi0 = superposition(space);
    const StateVector exact = testing::expm_evolve(h.at(0.0).dense(), psi0, 50.0);
    for (const bool powering : {true, false}) {
        const auto traj = evolve_state(h, psi0, 50.0, {.dt = 0.002, .samples = 2, .map_powering = powering});
        EXPECT_LT((traj.states.back() - exact).cwiseAbs().maxCoeff(), 1e-8) << "powering=" << powering;
    }
}

TEST(Kets, MapPoweringIsPlainRk4) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kDispersive, DriveSchedule::dispersive(0.1, 1.0));
    const StateVector psi0 = superposition(space);
    const auto a = evolve_state(h, psi0, 100.0, {.samples = 11, .map_powering = true});
    const auto b = evolve_state(h, psi0, 100.0, {.samples = 11, .map_powering = false});
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        EXPECT_LT((a.states[k] - b.states[k]).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Kets, BatchMatchesSingleColumns) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const double T = resonant_gate_time(0.1);
    DenseMatrix kets(static_cast<Eigen::Index>(space.dim()), 3);
    for (int q = 0; q < 3; ++q) kets.col(q) = qubit_embedding(space, q + 4);
    const DenseMatrix out = evolve_states_final(h, kets, T);
    for (int q = 0; q < 3; ++q) {
        const auto single = evolve_state(h, kets.col(q), T, {.samples = 2});
        EXPECT_LT((out.col(q) - single.states.back()).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Kets, StepHalvingConverges) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.05));
    const double T = resonant_gate_time(0.05);
    const StateVector psi0 = superposition(space);
    const auto coarse = evolve_state(h, psi0, T, {.dt = 0.01, .samples = 2});
    const auto fine = evolve_state(h, psi0, T, {.dt = 0.005, .samples = 2});
    EXPECT_LT((coarse.states.back() - fine.states.back()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Kets, SectorMatchesFullSpace) {
    const auto sector = build_space(2, 2);
    const auto full = build_space(2);
    const auto schedule = DriveSchedule::adiabatic(0.1);
    const double T = schedule.gate_time();
    const StateVector psi0 = superposition(sector);
    // Two-photon Fock states raise the norm bound of the full space, hence the finer step.
    const EvolveOptions opts{.dt = 0.005, .samples = 2};
    const auto a = evolve_state(gate_hamiltonian(sector, kResonant, schedule), psi0, T, opts);
    const auto b = evolve_state(gate_hamiltonian(full, kResonant, schedule), embed_state(sector, full, psi0), T, opts);
    EXPECT_LT((embed_state(sector, full, a.states.back()) - b.states.back()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kets, RejectsOversizedSteps) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.05));
    EXPECT_THROW(evolve_state(h, qubit_embedding(space, 0), 10.0, {.dt = 0.5}), std::invalid_argument);
    EXPECT_THROW(evolve_state(h, qubit_embedding(space, 0), -1.0), std::invalid_argument);
    EXPECT_THROW(evolve_state(h, StateVector::Zero(3), 1.0), std::invalid_argument);
}

TEST(Density, CavityDecayIsExponential) {
    const auto space = build_space(2, 2);
    const TimeDependentHamiltonian h(SparseOperator::zero(space));
    const double kappa = 0.2;
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    psi(*space.index_of(make_label("000", "010"))) = 1.0;
    const auto traj = evolve_density(h, {kappa, 0.0}, psi * psi.adjoint(), 10.0, {.samples = 11});
    const std::array targets{make_label("000", "010"), make_label("000", "000")};
    const auto table = population_series(traj, targets);
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        const double p = std::exp(-kappa * table.times[k]);
        EXPECT_NEAR(table.values(static_cast<Eigen::Index>(k), 0), p, 1e-9);
        EXPECT_NEAR(table.values(static_cast<Eigen::Index>(k), 1), 1.0 - p, 1e-9);
    }
}

TEST(Density, AtomicDecayBranchesEvenly) {
    const auto space = build_space(2, 2);
    const TimeDependentHamiltonian h(SparseOperator::zero(space));
    const double gamma = 0.3;
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    psi(*space.index_of(make_label("e00", "000"))) = 1.0;
    const auto traj = evolve_density(h, {0.0, gamma}, psi * psi.adjoint(), 8.0, {.samples = 9});
    const std::array targets{make_label("e00", "000"), make_label("100", "000"), make_label("000", "000")};
    const auto table = population_series(traj, targets);
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        const double p = std::exp(-gamma * table.times[k]);
        const auto r = static_cast<Eigen::Index>(k);
        EXPECT_NEAR(table.values(r, 0), p, 1e-9);
        EXPECT_NEAR(table.values(r, 1), (1.0 - p) / 2, 1e-9);
        EXPECT_NEAR(table.values(r, 2), (1.0 - p) / 2, 1e-9);
    }
}

TEST(Density, BlockGeneratorMatchesDenseReference) {
    const auto space = build_space(2, 2);
    const DecayParams decay{0.03, 0.02};
    const auto jumps = jump_operators(space, decay);
    const auto dense_jumps = testing::dense_jumps(space, decay);
    const DenseMatrix rho = testing::scrambled_density(static_cast<Eigen::Index>(space.dim()), 3);

    // Real-symmetric Hamiltonian: the real kernel applies.
    const auto real_h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    // An imaginary Hermitian drive forces the general complex path.
    auto complex_h = gate_hamiltonian(space, kDispersive, DriveSchedule::dispersive(0.1, 1.0));
    const auto raise = atom_transition(space, 1, Level::One, Level::Excited);
    complex_h.add_term(Complex(0.0, 1.0) * (raise - raise.adjoint()), [](double t) { return 0.01 * std::cos(t); }, 0.01);

    for (const TimeDependentHamiltonian* h : {&real_h, static_cast<const TimeDependentHamiltonian*>(&complex_h)}) {
        detail::BlockLindblad block(*h, jumps, rho);
        EXPECT_EQ(block.real_kernel(), h == &real_h);
        const auto packed = block.pack(rho);
        EXPECT_LT(max_abs(block.unpack(packed) - rho), 0.0 + 1e-300);
        for (const double t : {0.0, 3.3, 17.0}) {
            Eigen::VectorXcd out(packed.size());
            block.rhs(t, packed, out);
            const DenseMatrix expected = testing::lindblad_rhs(h->at(t).dense(), dense_jumps, rho);
            EXPECT_LT(max_abs(block.unpack(out) - expected), 1e-14);
        }
    }
}

TEST(Density, TrajectoryMatchesDenseRk4) {
    const auto space = build_space(2, 2);
    const DecayParams decay{0.05, 0.04};
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const StateVector psi = superposition(space);
    const DenseMatrix rho0 = psi * psi.adjoint();
    const auto traj = evolve_density(h, decay, rho0, 3.0, {.dt = 0.01, .samples = 2});
    const DenseMatrix reference = testing::dense_lindblad_rk4(h, decay, rho0, 3.0, 300);
    EXPECT_LT(max_abs(traj.densities.back() - reference), 1e-13);
}

TEST(Density, TracePreserved) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const StateVector psi = superposition(space);
    const auto traj = evolve_density(h, {0.01, 0.01}, psi * psi.adjoint(), resonant_gate_time(0.1), {.samples = 50});
    for (const auto& rho : traj.densities) {
        EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-6);
        EXPECT_LT(max_abs(rho - rho.adjoint()), 1e-12);
    }
}

TEST(Density, PropagatorIsLinear) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const DecayParams decay{0.01, 0.01};
    const double T = resonant_gate_time(0.1);
    const DenseMatrix a = qubit_embedding(space, 5) * qubit_embedding(space, 6).adjoint();
    const DenseMatrix b = qubit_embedding(space, 2) * qubit_embedding(space, 2).adjoint();
    const Complex ca(0.3, -0.4), cb(0.7, 0.0);
    const EvolveOptions opts{.samples = 2};
    const auto ea = evolve_density(h, decay, a, T, opts).densities.back();
    const auto eb = evolve_density(h, decay, b, T, opts).densities.back();
    const auto eab = evolve_density(h, decay, ca * a + cb * b, T, opts).densities.back();
    EXPECT_LT(max_abs(eab - (ca * ea + cb * eb)), 1e-8);
}

TEST(Density, DecayFreeDensityMatchesKets) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const double T = resonant_gate_time(0.1);
    const StateVector psi0 = superposition(space);
    const auto ket = evolve_state(h, psi0, T, {.samples = 2}).states.back();
    const auto rho = evolve_density(h, {}, psi0 * psi0.adjoint(), T, {.samples = 2}).densities.back();
    EXPECT_LT(max_abs(rho - ket * ket.adjoint()), 1e-10);
}

TEST(Density, SectorMatchesFullSpace) {
    const auto sector = build_space(2, 2);
    const auto full = build_space(2);
    const auto schedule = DriveSchedule::dispersive(0.1, 1.0);
    const DecayParams decay{0.01, 0.02};
    const StateVector psi = superposition(sector);
    const StateVector lifted = embed_state(sector, full, psi);
    const EvolveOptions opts{.dt = 0.005, .samples = 2};
    const auto a = evolve_density(gate_hamiltonian(sector, kDispersive, schedule), decay, psi * psi.adjoint(), 20.0, opts);
    const auto b =
        evolve_density(gate_hamiltonian(full, kDispersive, schedule), decay, lifted * lifted.adjoint(), 20.0, opts);
    // Decay only lowers the excitation count, so the sector is closed under the dissipator.
    const DenseMatrix& rs = a.densities.back();
    const DenseMatrix& rf = b.densities.back();
    double worst = 0.0;
    for (std::size_t i = 0; i < sector.dim(); ++i) {
        for (std::size_t j = 0; j < sector.dim(); ++j) {
            const auto fi = static_cast<Eigen::Index>(*full.index_of(sector.label(i)));
            const auto fj = static_cast<Eigen::Index>(*full.index_of(sector.label(j)));
            worst = std::max(worst, std::abs(rs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - rf(fi, fj)));
        }
    }
    EXPECT_LT(worst, 1e-12);
    EXPECT_NEAR(rf.trace().real(), 1.0, 1e-10);
}

TEST(Populations, SeriesLabelsAndErrors) {
    const auto space = build_space(2, 2);
    const auto h = gate_hamiltonian(space, kResonant, DriveSchedule::adiabatic(0.1));
    const auto traj = evolve_state(h, qubit_embedding(space, 6), 5.0, {.samples = 3});
    const std::array targets{make_label("110", "000")};
    const auto table = population_series(traj, targets);
    EXPECT_EQ(table.labels.front(), "|110>|000>");
    EXPECT_EQ(table.values.rows(), 3);
    EXPECT_DOUBLE_EQ(table.values(0, 0), 1.0);
    const std::array missing{make_label("1e1", "000")};
    EXPECT_THROW(population_series(traj, missing), std::invalid_argument);
}

}  // namespace
}  // namespace fredkin
