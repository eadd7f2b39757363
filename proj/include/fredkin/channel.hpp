// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file channel.hpp
 * @brief Reconstruction of the three-qubit channel realised by one gate run and
 *        its average gate fidelity against the ideal Fredkin gate.
 *
 * Qubit index q = 4*q2 + 2*q1 + q3 (control first). The channel is stored as
 * the images eps(|m><n|) of the 64 matrix units; images of general operators
 * follow by linearity.
 */

#pragma once

#include "fredkin/hilbert.hpp"
#include "fredkin/model.hpp"
#include "fredkin/propagate.hpp"
#include "fredkin/pulses.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace fredkin {

inline constexpr int kQubitDim = 8;

enum class Scheme { Resonant, Dispersive };

std::string to_string(Scheme scheme);
/// Parses "resonant" or "dispersive"; throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view text);

/// Controlled-SWAP: identity except that indices 5 and 6 are exchanged.
QubitMatrix fredkin_ideal();

/// The 64 products P2 (x) P1 (x) P3 over {I, X, Y, Z}, index 16*i2 + 4*i1 + i3.
const std::array<QubitMatrix, 64>& pauli_tensor_basis();

/// Label such as "IXZ" for element j of pauli_tensor_basis(), factors in (2, 1, 3) order.
std::string pauli_label(int j);

class QuantumChannel {
public:
    /// All images zero.
    QuantumChannel();

    static QuantumChannel identity();
    static QuantumChannel unitary(const QubitMatrix& U);
    static QuantumChannel from_map(const std::function<QubitMatrix(const QubitMatrix&)>& map);

    const QubitMatrix& image(int m, int n) const { return images_.at(static_cast<std::size_t>(m * kQubitDim + n)); }
    void set_image(int m, int n, const QubitMatrix& value) {
        images_.at(static_cast<std::size_t>(m * kQubitDim + n)) = value;
    }

    /// eps(A) = sum_mn A(m, n) eps(|m><n|).
    QubitMatrix apply(const QubitMatrix& A) const;

    /// Choi matrix sum_mn |m><n| (x) eps(|m><n|).
    Eigen::Matrix<Complex, 64, 64> choi() const;

private:
    std::array<QubitMatrix, 64> images_;
};

/// Everything needed to run one gate.
struct GateSetup {
    Scheme scheme = Scheme::Resonant;
    PhysParams phys;
    DriveSchedule schedule = DriveSchedule::adiabatic(0.05);
    DecayParams decay;
    int fock_cap = 2;
    std::optional<int> sector_cap = 2;
    EvolveOptions evolve;
    unsigned threads = 0;        ///< 0: hardware concurrency
    bool force_density = false;  ///< use the Lindblad path even without decay
};

/// Resonant scheme: J = g, Delta = 0, adiabatic pulse of peak Omega_max.
GateSetup resonant_setup(double omega_max, const DecayParams& decay = {});
/// Dispersive scheme: Delta = J = g, constant drive Omega for g pi / Omega^2.
GateSetup dispersive_setup(double omega, const DecayParams& decay = {});

struct ChannelResult {
    QuantumChannel channel;
    double gate_time = 0.0;
    /// 1 - mean population left in the qubit states with vacuum cavities.
    double leakage = 0.0;
    /// Largest |trace - 1| (density path) or |norm^2 - 1| (ket path) over basis inputs.
    double trace_drift = 0.0;
    bool unitary_path = false;
    /// Evolved qubit kets as columns (ket path only).
    std::optional<DenseMatrix> final_kets;
    std::optional<HilbertSpace> space;
};

/**
 * Evolves the embedded matrix units for the schedule's gate time and extracts
 * the qubit images. Without decay the eight basis kets are evolved instead and
 * images are formed from their outer products.
 */
ChannelResult reconstruct_channel(const GateSetup& setup);

/// Images from evolved qubit kets (columns) on `space`.
QuantumChannel channel_from_kets(const HilbertSpace& space, const DenseMatrix& kets);

struct FidelityReport {
    double fidelity = 0.0;
    double imaginary_residue = 0.0;  ///< |Im| of the 64-term trace sum
    bool imaginary_flag = false;     ///< residue >= 1e-8
};

/// [sum_j tr(U U_j^dagger U^dagger eps(U_j)) + d^2] / [d^2 (d + 1)] over the Pauli basis, d = 8.
FidelityReport average_gate_fidelity(const QuantumChannel& channel, const QubitMatrix& ideal);

/// |tr(U^dagger M) / d|^2.
double process_fidelity(const QubitMatrix& M, const QubitMatrix& U);
/// (d F_pro + 1) / (d + 1).
double average_from_process(double process);

/// M(q', q) = <q'|<000| psi_q>, the vacuum-cavity block of the evolved kets.
QubitMatrix vacuum_block(const HilbertSpace& space, const DenseMatrix& kets);

/**
 * Kraus decomposition of channel_from_kets: one 8x8 operator per cavity
 * configuration, K_c(q', q) = <q'|<c| psi_q>. Configurations with no overlap are skipped.
 */
std::vector<QubitMatrix> cavity_kraus(const HilbertSpace& space, const DenseMatrix& kets);

}  // namespace fredkin
