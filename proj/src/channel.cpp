// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/channel.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace fredkin {

namespace {

constexpr double kImaginaryLimit = 1e-8;

Eigen::Matrix2cd pauli(int i) {
    const Complex I(0.0, 1.0);
    Eigen::Matrix2cd p;
    switch (i) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, -I, I, 0; break;
        default: p << 1, 0, 0, -1; break;
    }
    return p;
}

// P2 (x) P1 (x) P3 with qubit index 4*q2 + 2*q1 + q3.
QubitMatrix pauli_product(int i2, int i1, int i3) {
    const Eigen::Matrix2cd p2 = pauli(i2), p1 = pauli(i1), p3 = pauli(i3);
    QubitMatrix out;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) out(r, c) = p2(r >> 2, c >> 2) * p1((r >> 1) & 1, (c >> 1) & 1) * p3(r & 1, c & 1);
    }
    return out;
}

std::vector<Eigen::Index> vacuum_indices(const HilbertSpace& space) {
    std::vector<Eigen::Index> idx;
    for (int q = 0; q < kQubitDim; ++q) {
        BasisLabel label;
        label.atoms = qubit_atoms(q);
        const auto i = space.index_of(label);
        if (!i) throw std::invalid_argument("qubit state missing from the space");
        idx.push_back(static_cast<Eigen::Index>(*i));
    }
    return idx;
}

std::optional<int> qubit_index(const std::array<Level, 3>& atoms) {
    for (int q = 0; q < kQubitDim; ++q) {
        if (qubit_atoms(q) == atoms) return q;
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::Resonant ? "resonant" : "dispersive"; }

Scheme parse_scheme(std::string_view text) {
    if (text == "resonant") return Scheme::Resonant;
    if (text == "dispersive") return Scheme::Dispersive;
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

QubitMatrix fredkin_ideal() {
    QubitMatrix u = QubitMatrix::Identity();
    u.row(5).swap(u.row(6));
    return u;
}

const std::array<QubitMatrix, 64>& pauli_tensor_basis() {
    static const std::array<QubitMatrix, 64> basis = [] {
        std::array<QubitMatrix, 64> out;
        for (int j = 0; j < 64; ++j) out[static_cast<std::size_t>(j)] = pauli_product(j / 16, (j / 4) % 4, j % 4);
        return out;
    }();
    return basis;
}

std::string pauli_label(int j) {
    if (j < 0 || j >= 64) throw std::out_of_range("pauli_label: index outside 0..63");
    static constexpr char kNames[] = "IXYZ";
    return {kNames[j / 16], kNames[(j / 4) % 4], kNames[j % 4]};
}

// ---------------------------------------------------------------------------

QuantumChannel::QuantumChannel() { images_.fill(QubitMatrix::Zero()); }

QuantumChannel QuantumChannel::identity() {
    return from_map([](const QubitMatrix& A) { return A; });
}

QuantumChannel QuantumChannel::unitary(const QubitMatrix& U) {
    return from_map([&U](const QubitMatrix& A) { return QubitMatrix(U * A * U.adjoint()); });
}

QuantumChannel QuantumChannel::from_map(const std::function<QubitMatrix(const QubitMatrix&)>& map) {
    QuantumChannel ch;
    for (int m = 0; m < kQubitDim; ++m) {
        for (int n = 0; n < kQubitDim; ++n) {
            QubitMatrix unit = QubitMatrix::Zero();
            unit(m, n) = 1.0;
            ch.set_image(m, n, map(unit));
        }
    }
    return ch;
}

QubitMatrix QuantumChannel::apply(const QubitMatrix& A) const {
    QubitMatrix out = QubitMatrix::Zero();
    for (int m = 0; m < kQubitDim; ++m) {
        for (int n = 0; n < kQubitDim; ++n) {
            if (A(m, n) != Complex(0.0)) out += A(m, n) * image(m, n);
        }
    }
    return out;
}

Eigen::Matrix<Complex, 64, 64> QuantumChannel::choi() const {
    Eigen::Matrix<Complex, 64, 64> c;
    for (int m = 0; m < kQubitDim; ++m) {
        for (int n = 0; n < kQubitDim; ++n) c.block<8, 8>(8 * m, 8 * n) = image(m, n);
    }
    return c;
}

// ---------------------------------------------------------------------------

GateSetup resonant_setup(double omega_max, const DecayParams& decay) {
    GateSetup s;
    s.scheme = Scheme::Resonant;
    s.phys = {1.0, 1.0, 0.0};
    s.schedule = DriveSchedule::adiabatic(omega_max);
    s.decay = decay;
    return s;
}

GateSetup dispersive_setup(double omega, const DecayParams& decay) {
    GateSetup s;
    s.scheme = Scheme::Dispersive;
    s.phys = {1.0, 1.0, 1.0};
    s.schedule = DriveSchedule::dispersive(omega, 1.0);
    s.decay = decay;
    return s;
}

QuantumChannel channel_from_kets(const HilbertSpace& space, const DenseMatrix& kets) {
    QuantumChannel ch;
    for (int m = 0; m < kQubitDim; ++m) {
        for (int n = 0; n < kQubitDim; ++n) {
            ch.set_image(m, n, qubit_extraction(space, kets.col(m) * kets.col(n).adjoint()));
        }
    }
    return ch;
}

ChannelResult reconstruct_channel(const GateSetup& setup) {
    setup.decay.validate();
    const HilbertSpace space = build_space(setup.fock_cap, setup.sector_cap);
    const TimeDependentHamiltonian h = gate_hamiltonian(space, setup.phys, setup.schedule);
    const double T = setup.schedule.gate_time();
    const auto vac = vacuum_indices(space);

    DenseMatrix kets0(static_cast<Eigen::Index>(space.dim()), kQubitDim);
    for (int q = 0; q < kQubitDim; ++q) kets0.col(q) = qubit_embedding(space, q);

    ChannelResult result;
    result.gate_time = T;
    result.space = space;

    if (setup.decay.is_zero() && !setup.force_density) {
        DenseMatrix kets = evolve_states_final(h, kets0, T, setup.evolve);
        result.channel = channel_from_kets(space, kets);
        result.unitary_path = true;
        double kept = 0.0;
        for (int q = 0; q < kQubitDim; ++q) {
            result.trace_drift = std::max(result.trace_drift, std::abs(kets.col(q).squaredNorm() - 1.0));
            for (const auto i : vac) kept += std::norm(kets(i, q));
        }
        result.leakage = 1.0 - kept / kQubitDim;
        result.final_kets = std::move(kets);
        return result;
    }

    // Hermiticity preservation gives eps(|n><m|) = eps(|m><n|)^dagger, so m <= n suffices.
    std::vector<std::pair<int, int>> jobs;
    for (int m = 0; m < kQubitDim; ++m) {
        for (int n = m; n < kQubitDim; ++n) jobs.emplace_back(m, n);
    }
    std::vector<QubitMatrix> images(jobs.size());
    std::vector<double> drift(jobs.size(), 0.0), kept(jobs.size(), 0.0);
    EvolveOptions opts = setup.evolve;
    opts.samples = 2;
    detail::parallel_for(jobs.size(), setup.threads, [&](std::size_t k) {
        const auto [m, n] = jobs[k];
        const DenseMatrix rho0 = kets0.col(m) * kets0.col(n).adjoint();
        const Trajectory traj = evolve_density(h, setup.decay, rho0, T, opts);
        const DenseMatrix& rho = traj.densities.back();
        images[k] = qubit_extraction(space, rho);
        if (m == n) {
            drift[k] = std::abs(rho.trace() - 1.0);
            for (const auto i : vac) kept[k] += rho(i, i).real();
        }
    });
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto [m, n] = jobs[k];
        result.channel.set_image(m, n, images[k]);
        if (m != n) result.channel.set_image(n, m, images[k].adjoint());
        result.trace_drift = std::max(result.trace_drift, drift[k]);
        result.leakage += kept[k];
    }
    result.leakage = 1.0 - result.leakage / kQubitDim;
    return result;
}

// ---------------------------------------------------------------------------

FidelityReport average_gate_fidelity(const QuantumChannel& channel, const QubitMatrix& ideal) {
    constexpr double d = kQubitDim;
    Complex sum = 0.0;
    for (const auto& Uj : pauli_tensor_basis()) {
        sum += (ideal * Uj.adjoint() * ideal.adjoint() * channel.apply(Uj)).trace();
    }
    FidelityReport report;
    report.fidelity = (sum.real() + d * d) / (d * d * (d + 1.0));
    report.imaginary_residue = std::abs(sum.imag());
    report.imaginary_flag = report.imaginary_residue >= kImaginaryLimit;
    return report;
}

double process_fidelity(const QubitMatrix& M, const QubitMatrix& U) {
    return std::norm((U.adjoint() * M).trace() / static_cast<double>(kQubitDim));
}

double average_from_process(double process) {
    constexpr double d = kQubitDim;
    return (d * process + 1.0) / (d + 1.0);
}

QubitMatrix vacuum_block(const HilbertSpace& space, const DenseMatrix& kets) {
    const auto vac = vacuum_indices(space);
    QubitMatrix M;
    for (int r = 0; r < kQubitDim; ++r) {
        for (int c = 0; c < kQubitDim; ++c) M(r, c) = kets(vac[static_cast<std::size_t>(r)], c);
    }
    return M;
}

std::vector<QubitMatrix> cavity_kraus(const HilbertSpace& space, const DenseMatrix& kets) {
    std::map<std::array<int, 3>, QubitMatrix> by_config;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const BasisLabel& label = space.label(i);
        const auto q = qubit_index(label.atoms);
        if (!q) continue;
        auto [it, inserted] = by_config.try_emplace(label.photons, QubitMatrix::Zero());
        for (int c = 0; c < kQubitDim; ++c) it->second(*q, c) = kets(static_cast<Eigen::Index>(i), c);
    }
    std::vector<QubitMatrix> out;
    for (auto& [config, K] : by_config) {
        if (K.cwiseAbs().maxCoeff() > 0.0) out.push_back(K);
    }
    return out;
}

}  // namespace fredkin
