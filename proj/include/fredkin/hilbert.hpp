// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Composite basis of three three-level atoms and three cavity modes,
 *        plus the elementary sparse operators all Hamiltonians are built from.
 *
 * Tensor order is atom1 ⊗ atom2 ⊗ atom3 ⊗ cav1 ⊗ cav2 ⊗ cav3, enumerated
 * lexicographically with atom1 most significant. An optional excitation cap
 * keeps only labels with excitation_count(label) <= cap.
 *
 * Operators on a capped space are projections P·O·P of the operator on the
 * uncapped (Fock-truncated) space. Products of several elementary factors must
 * therefore be assembled with product_operator(), which composes the factors on
 * labels and checks the cap only on the final label. Multiplying two already
 * projected SparseOperators loses paths through states outside the cap.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fredkin {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using QubitMatrix = Eigen::Matrix<Complex, 8, 8>;

/// Atomic levels; the numeric values are the level indices 0, 1, 2.
enum class Level : std::uint8_t { Zero = 0, One = 1, Excited = 2 };

/// Composite label (a1, a2, a3, n1, n2, n3).
struct BasisLabel {
    std::array<Level, 3> atoms{Level::Zero, Level::Zero, Level::Zero};
    std::array<int, 3> photons{0, 0, 0};

    friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

/// Builds a label from compact text such as "e10" and "010" (atoms, photons).
BasisLabel make_label(std::string_view atoms, std::string_view photons);

/// Renders a label as "|e10>|000>".
std::string to_string(const BasisLabel& label);

/// Conserved weight: photons, plus |1> or |e> on atoms 1 and 3, plus |e> on atom 2.
int excitation_count(const BasisLabel& label);

/// Immutable enumerated basis. Copies share the same underlying tables.
class HilbertSpace {
public:
    std::size_t dim() const noexcept;
    int fock_cap() const noexcept;
    std::optional<int> sector_cap() const noexcept;

    const BasisLabel& label(std::size_t index) const;
    const std::vector<BasisLabel>& basis() const noexcept;
    std::optional<std::size_t> index_of(const BasisLabel& label) const;

    bool operator==(const HilbertSpace& other) const noexcept;

private:
    struct Tables;
    explicit HilbertSpace(std::shared_ptr<const Tables> tables);
    friend HilbertSpace build_space(int fock_cap, std::optional<int> sector_cap);

    std::shared_ptr<const Tables> tables_;
};

/**
 * Enumerates the basis. With a sector cap only labels whose excitation count
 * does not exceed it are kept.
 *
 * Throws std::invalid_argument for fock_cap < 1 or a negative sector cap.
 */
HilbertSpace build_space(int fock_cap, std::optional<int> sector_cap = std::nullopt);

/// Complex sparse matrix tied to the space it acts on.
class SparseOperator {
public:
    SparseOperator(HilbertSpace space, SparseMatrix matrix, std::size_t dropped = 0);

    /// Zero operator on the space.
    static SparseOperator zero(const HilbertSpace& space);

    const HilbertSpace& space() const noexcept { return space_; }
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return space_.dim(); }

    /// Matrix elements that would have landed outside the sector cap.
    std::size_t dropped_transitions() const noexcept { return dropped_; }

    DenseMatrix dense() const { return DenseMatrix(matrix_); }
    SparseOperator adjoint() const;
    StateVector apply(const StateVector& psi) const;

    /// Largest |H - H^dagger| entry relative to the largest |H| entry.
    double hermiticity_defect() const;

    SparseOperator& operator+=(const SparseOperator& other);
    SparseOperator& operator-=(const SparseOperator& other);
    SparseOperator& operator*=(Complex factor);

    friend SparseOperator operator+(SparseOperator lhs, const SparseOperator& rhs) { return lhs += rhs; }
    friend SparseOperator operator-(SparseOperator lhs, const SparseOperator& rhs) { return lhs -= rhs; }
    friend SparseOperator operator*(Complex factor, SparseOperator op) { return op *= factor; }
    friend SparseOperator operator*(SparseOperator op, Complex factor) { return op *= factor; }

    /// Product of the projected matrices (see the file comment for the caveat).
    friend SparseOperator operator*(const SparseOperator& lhs, const SparseOperator& rhs);

private:
    HilbertSpace space_;
    SparseMatrix matrix_;
    std::size_t dropped_ = 0;
};

// Elementary factors, 1-based mode and atom indices as in the physics notation.
struct CavityLowering { int cavity; };
struct CavityRaising { int cavity; };
struct AtomTransition { int atom; Level from; Level to; };  // |to><from|
using Elementary = std::variant<CavityLowering, CavityRaising, AtomTransition>;

/**
 * Assembles coefficient * f_1 f_2 ... f_n on the space, factors written in
 * operator order (f_n acts first). Bosonic raising beyond fock_cap is truncated
 * at every factor; the sector cap is applied to the final label only, and such
 * drops are counted in dropped_transitions().
 */
SparseOperator product_operator(const HilbertSpace& space,
                                std::span<const Elementary> factors,
                                Complex coefficient = 1.0);

/// a_k with k in 1..3.
SparseOperator cavity_lowering(const HilbertSpace& space, int cavity);

/// sigma^i_{to,from} = |to><from| on atom i (1..3).
SparseOperator atom_transition(const HilbertSpace& space, int atom, Level from, Level to);

/// Diagonal operator with the excitation count of every basis label.
SparseOperator excitation_counter(const HilbertSpace& space);

/// Atom levels of logical qubit state q = 4*q2 + 2*q1 + q3 (control first).
std::array<Level, 3> qubit_atoms(int q);

/// |a1 a2 a3>|000> for the logical qubit index q. Throws for q outside 0..7.
StateVector qubit_embedding(const HilbertSpace& space, int q);

/**
 * Partial trace over the cavities followed by restriction of every atom to
 * span{|0>, |1>}, reindexed in control-first qubit order.
 */
QubitMatrix qubit_extraction(const HilbertSpace& space, const DenseMatrix& op);

/// Lifts a state of `from` into `to` by label matching; labels absent from `to` must carry zero amplitude.
StateVector embed_state(const HilbertSpace& from, const HilbertSpace& to, const StateVector& psi);

}  // namespace fredkin
