// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Interaction-picture Hamiltonian of the three-cavity array, its Zeno
 *        decomposition, and the analytic blocks and effective Hamiltonians of
 *        the resonant and dispersive gate schemes.
 *
 * All rates share one unit; callers normally set g = 1.
 */

#pragma once

#include "fredkin/hilbert.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fredkin {

/// Atom–cavity coupling g, hopping J and one-photon detuning Delta.
struct PhysParams {
    double g = 1.0;
    double J = 1.0;
    double delta = 0.0;

    /// Throws std::invalid_argument unless g > 0, J >= 0 and delta >= 0.
    void validate() const;
};

/// Real eigenpairs of a small closed block, vectors stored as columns.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    std::vector<std::string> basis_labels;

    /// Largest ||M v - lambda v|| over all pairs.
    double max_residual(const Eigen::MatrixXd& block) const;
    /// Largest |V^T V - I| entry.
    double orthonormality_defect() const;
};

// ---- Hamiltonian pieces on a HilbertSpace -----------------------------------

/// |e_i><1_i| + h.c. for a driven atom i in {1, 3}.
SparseOperator drive_coupling(const HilbertSpace& space, int atom);
/// Sum over k = 1, 2 of a_k^dagger a_{k+1} + h.c.
SparseOperator hopping_coupling(const HilbertSpace& space);
/// Sum over i of a_i |e_i><0_i| + h.c.
SparseOperator atom_cavity_coupling(const HilbertSpace& space);
/// Sum over i of |e_i><e_i|.
SparseOperator excited_population(const HilbertSpace& space);

/// Full interaction-picture Hamiltonian with drive amplitudes omega1, omega3.
SparseOperator full_hamiltonian(const HilbertSpace& space, const PhysParams& params, double omega1, double omega3);

/// Drive part H1 and the "measuring" part H2 (hopping plus atom–cavity).
struct ZenoSplit {
    SparseOperator drive;
    SparseOperator measurement;
};

/// H1 + H2 + Delta * excited_population equals full_hamiltonian.
ZenoSplit zeno_split(const HilbertSpace& space, const PhysParams& params, double omega1, double omega3);

struct ZenoDecomposition {
    std::vector<double> eigenvalues;           ///< one per cluster, ascending
    std::vector<DenseMatrix> projectors;       ///< P_n, same order
    DenseMatrix zeno_hamiltonian;              ///< sum_n eta_n P_n + P_n H1 P_n
    DenseMatrix dark_hamiltonian;              ///< P_0 H1 P_0 (zero if H2 has no null space)
    std::optional<std::size_t> dark_cluster;   ///< index of the eta = 0 cluster
};

/**
 * Eigendecomposes H2, groups eigenvalues whose neighbours are within
 * tolerance * g, and forms the Zeno Hamiltonian. Throws std::runtime_error when
 * two clusters sit closer than 10 * tolerance * g.
 */
ZenoDecomposition zeno_hamiltonian(const DenseMatrix& drive, const DenseMatrix& measurement, double g,
                                   double tolerance = 1e-8);

// ---- Resonant scheme -------------------------------------------------------

/// Closed seven-state block containing |011>|000> and |110>|000>, in the order
/// |011>|000>, |01e>|000>, |010>|001>, |010>|010>, |010>|100>, |e10>|000>, |110>|000>.
std::array<BasisLabel, 7> resonant_block_basis();

/// Hamiltonian restricted to resonant_block_basis(). Delta appears on the two
/// excited-atom diagonal entries; it vanishes for the resonant scheme.
Eigen::Matrix<double, 7, 7> resonant_block(const PhysParams& params, double omega1, double omega3);

/**
 * Closed-form eigensystem of the drive-free interior (states 2..6 of the block)
 * at J = g, Delta = 0: eigenvalues 0, -g, g, -sqrt3 g, sqrt3 g. The first
 * vector is the dark state. Throws std::invalid_argument otherwise.
 */
EigenSystem resonant_eigensystem(const PhysParams& params);

/// Dark state (|e10>|000> + |01e>|000> - |010>|010>)/sqrt3 on a space.
StateVector dark_state(const HilbertSpace& space);

/// The seven-state block rewritten in the basis |011>, |E_1..E_5>, |110>.
Eigen::Matrix<double, 7, 7> resonant_dressed_view(const PhysParams& params, double omega1, double omega3);

struct EffectiveModel3 {
    Eigen::Matrix3d hamiltonian;  ///< basis |110>|000>, |011>|000>, |D>
    bool outside_zeno_regime = false;  ///< set when max |Omega|/g > 0.2
};

/// (Omega1 |110> + Omega3 |011>)|000><D| / sqrt3 + h.c.
EffectiveModel3 effective_resonant(const PhysParams& params, double omega1, double omega3);

// ---- Dispersive scheme -----------------------------------------------------

/// Columns are |phi_1>, |phi_a>, |phi_2>, |phi_b>, |phi_3>, |phi_c> on the space.
DenseMatrix dispersive_collective_basis(const HilbertSpace& space);

/// Three 2x2 blocks [[D, g], [g, -sqrt2 J]], [[D, g], [g, sqrt2 J]], [[D, g], [g, 0]].
Eigen::Matrix<double, 6, 6> dispersive_block(const PhysParams& params);

struct DispersiveSpectrum {
    EigenSystem system;  ///< E_1..E_6, vectors in the collective basis
    double alpha = 0.0;
    double beta = 0.0;
};

/// Closed-form eigenvalues, eigenvectors and the alpha, beta coefficients.
DispersiveSpectrum dispersive_eigensystem(const PhysParams& params);

struct DipoleDipoleModel {
    Eigen::Matrix2d single;  ///< on |100>|000>, |001>|000>
    Eigen::Matrix2d dual;    ///< on |110>|000>, |011>|000>
};

/// Effective dipole–dipole Hamiltonians at Delta = J = g; throws otherwise.
DipoleDipoleModel effective_dispersive(const PhysParams& params, double omega1, double omega3);

/**
 * Second-order sum over virtual channels:
 *   result(f, s) = -sum_i conj(c(i, f)) c(i, s) / E_i,   c(i, s) = <E_i|V|s>.
 * `couplings` has one row per eigenpair of `system` and one column per qubit state.
 */
Eigen::MatrixXd virtual_channel_sum(const EigenSystem& system, const Eigen::MatrixXd& couplings);

/// Channel sum for |100>, |001> through the six dispersive eigenstates.
Eigen::Matrix2d dispersive_single_channels(const PhysParams& params, double omega1, double omega3);

/// Channel sum for |110>, |011> through the five interior states of the seven-state block.
Eigen::Matrix2d dispersive_dual_channels(const PhysParams& params, double omega1, double omega3);

}  // namespace fredkin
