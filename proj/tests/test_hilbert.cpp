// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/hilbert.hpp"
#include "fredkin/model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

namespace fredkin {
namespace {

using testing::max_abs;

// Independent enumeration: nested loops in lexicographic label order.
std::vector<BasisLabel> brute_force_basis(int fock_cap, std::optional<int> sector_cap) {
    std::vector<BasisLabel> out;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int a2 = 0; a2 < 3; ++a2)
            for (int a3 = 0; a3 < 3; ++a3)
                for (int n1 = 0; n1 <= fock_cap; ++n1)
                    for (int n2 = 0; n2 <= fock_cap; ++n2)
                        for (int n3 = 0; n3 <= fock_cap; ++n3) {
                            const int c = n1 + n2 + n3 + (a1 != 0) + (a3 != 0) + (a2 == 2);
                            if (sector_cap && c > *sector_cap) continue;
                            out.push_back({{Level(a1), Level(a2), Level(a3)}, {n1, n2, n3}});
                        }
    return out;
}

TEST(HilbertSpace, SectorDimensionMatchesBruteForce) {
    const auto space = build_space(2, 2);
    EXPECT_EQ(space.dim(), 68u);
    EXPECT_EQ(space.basis(), brute_force_basis(2, 2));
}

TEST(HilbertSpace, FullSpaceIsTensorProduct) {
    const auto space = build_space(2);
    EXPECT_EQ(space.dim(), 729u);
    EXPECT_EQ(space.basis(), brute_force_basis(2, std::nullopt));
    EXPECT_EQ(build_space(3, 3).basis(), brute_force_basis(3, 3));
}

TEST(HilbertSpace, IndexRoundTrip) {
    const auto space = build_space(2, 2);
    for (std::size_t i = 0; i < space.dim(); ++i) EXPECT_EQ(space.index_of(space.label(i)), i);
    EXPECT_FALSE(space.index_of(make_label("1e1", "000")).has_value());
}

TEST(HilbertSpace, CopiesCompareEqual) {
    const auto a = build_space(2, 2);
    const auto b = a;
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == build_space(2));
}

TEST(HilbertSpace, RejectsBadCaps) {
    EXPECT_THROW(build_space(0), std::invalid_argument);
    EXPECT_THROW(build_space(2, -1), std::invalid_argument);
}

TEST(BasisLabel, ExcitationCountWeights) {
    EXPECT_EQ(excitation_count(make_label("000", "000")), 0);
    EXPECT_EQ(excitation_count(make_label("e10", "000")), 1);
    EXPECT_EQ(excitation_count(make_label("010", "000")), 0);
    EXPECT_EQ(excitation_count(make_label("0e0", "000")), 1);
    EXPECT_EQ(excitation_count(make_label("1e1", "010")), 4);
    EXPECT_EQ(excitation_count(make_label("000", "201")), 3);
}

TEST(BasisLabel, TextRoundTrip) {
    EXPECT_EQ(to_string(make_label("e10", "002")), "|e10>|002>");
    EXPECT_THROW(make_label("x10", "000"), std::invalid_argument);
    EXPECT_THROW(make_label("010", "00"), std::invalid_argument);
}

TEST(Operators, CavityLoweringMatrixElements) {
    const auto space = build_space(2);
    const auto a2 = cavity_lowering(space, 2).dense();
    const auto i2 = *space.index_of(make_label("000", "020"));
    const auto i1 = *space.index_of(make_label("000", "010"));
    const auto i0 = *space.index_of(make_label("000", "000"));
    EXPECT_NEAR(std::abs(a2(i1, i2) - std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a2(i0, i1) - 1.0), 0.0, 1e-15);
    EXPECT_THROW(cavity_lowering(space, 4), std::out_of_range);
}

TEST(Operators, AtomTransitionIsProjector) {
    const auto space = build_space(2);
    const auto s = atom_transition(space, 2, Level::One, Level::Excited);
    const auto from = *space.index_of(make_label("010", "000"));
    const auto to = *space.index_of(make_label("0e0", "000"));
    EXPECT_EQ(s.dense()(to, from), Complex(1.0));
    EXPECT_NEAR(max_abs((s.adjoint() * s).dense() - atom_transition(space, 2, Level::One, Level::One).dense()), 0.0,
                0.0);
}

// a_1 a_2^dagger on |110>|100> passes through |110>|110>, outside the C <= 2 sector.
TEST(Operators, ProductOperatorKeepsPathsThroughTheCap) {
    const auto space = build_space(2, 2);
    const std::array<Elementary, 2> factors{CavityLowering{1}, CavityRaising{2}};
    const auto composed = product_operator(space, factors).dense();
    const auto from = *space.index_of(make_label("110", "100"));
    const auto to = *space.index_of(make_label("110", "010"));
    EXPECT_EQ(composed(to, from), Complex(1.0));

    const auto projected = (cavity_lowering(space, 1) * cavity_lowering(space, 2).adjoint()).dense();
    EXPECT_EQ(projected(to, from), Complex(0.0));
}

TEST(Operators, ProductOperatorCountsDroppedTransitions) {
    const auto space = build_space(2, 2);
    const std::array<Elementary, 1> raise{CavityRaising{1}};
    EXPECT_GT(product_operator(space, raise).dropped_transitions(), 0u);
    const std::array<Elementary, 1> lower{CavityLowering{1}};
    EXPECT_EQ(product_operator(space, lower).dropped_transitions(), 0u);
}

TEST(Operators, ExcitationCounterCommutesWithHamiltonian) {
    const auto space = build_space(2);
    const auto H = full_hamiltonian(space, {1.0, 0.7, 0.3}, 0.2, -0.2).dense();
    const auto C = excitation_counter(space).dense();
    EXPECT_LT(max_abs(H * C - C * H), 1e-14);
}

TEST(Qubits, AtomLevelsFollowControlFirstOrder) {
    // q = 4 q2 + 2 q1 + q3
    EXPECT_EQ(qubit_atoms(6), (std::array{Level::One, Level::One, Level::Zero}));
    EXPECT_EQ(qubit_atoms(5), (std::array{Level::Zero, Level::One, Level::One}));
    EXPECT_EQ(qubit_atoms(2), (std::array{Level::One, Level::Zero, Level::Zero}));
    EXPECT_EQ(qubit_atoms(1), (std::array{Level::Zero, Level::Zero, Level::One}));
    EXPECT_THROW(qubit_atoms(8), std::out_of_range);
}

TEST(Qubits, ExtractionOfEmbeddedOuterProducts) {
    const auto space = build_space(2, 2);
    for (int m = 0; m < 8; ++m) {
        for (int n = 0; n < 8; ++n) {
            const DenseMatrix op = qubit_embedding(space, m) * qubit_embedding(space, n).adjoint();
            QubitMatrix expected = QubitMatrix::Zero();
            expected(m, n) = 1.0;
            EXPECT_EQ(qubit_extraction(space, op), expected);
        }
    }
}

TEST(Qubits, ExtractionTracesCavitiesAndDropsExcitedAtoms) {
    const auto space = build_space(2, 2);
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    psi(*space.index_of(make_label("100", "010"))) = 0.6;
    psi(*space.index_of(make_label("e00", "000"))) = 0.8;
    const QubitMatrix rho = qubit_extraction(space, psi * psi.adjoint());
    QubitMatrix expected = QubitMatrix::Zero();
    expected(2, 2) = 0.36;
    EXPECT_LT((rho - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qubits, EmbedStateBetweenSpaces) {
    const auto sector = build_space(2, 2);
    const auto full = build_space(2);
    const StateVector psi = qubit_embedding(sector, 3);
    const StateVector lifted = embed_state(sector, full, psi);
    EXPECT_EQ(lifted, qubit_embedding(full, 3));
    EXPECT_EQ(embed_state(full, sector, lifted), psi);

    StateVector outside = StateVector::Zero(static_cast<Eigen::Index>(full.dim()));
    outside(*full.index_of(make_label("1e1", "000"))) = 1.0;
    EXPECT_THROW(embed_state(full, sector, outside), std::invalid_argument);
}

}  // namespace
}  // namespace fredkin
