// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

// Internal kernels shared by the ket and density integrators.
//
// The Hamiltonian is block diagonal in the connected components of its sparsity
// graph (on the C <= 2 sector: sizes 29, 22, 8, 7, 1, 1). A density operator is
// stored as dense blocks rho_ij over the block pairs reachable from rho0 through
// the jump operators, packed into one flat vector so that RK4 combinations are
// plain vector updates.

#pragma once

#include "fredkin/hilbert.hpp"
#include "fredkin/propagate.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

namespace fredkin::detail {

/// M(a) = C_0 + sum_k a_k C_k stored on the union sparsity pattern; update()
/// rewrites the values in place without reallocating.
class AffineSparse {
public:
    AffineSparse() = default;
    explicit AffineSparse(std::span<const SparseMatrix> parts);

    void update(std::span<const double> amplitudes);
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<Eigen::VectorXcd>& coefficients() const noexcept { return coefficients_; }

private:
    SparseMatrix matrix_;
    std::vector<Eigen::VectorXcd> coefficients_;
};

/// Step indices of the sample grid; `samples` is clamped to [2, steps + 1].
std::vector<std::size_t> sample_steps(std::size_t steps, std::size_t samples);

/// Evaluates every term amplitude at time t.
void amplitudes_at(const TimeDependentHamiltonian& h, double t, std::vector<double>& out);

/// Connected components of the union sparsity graph of the given operators.
std::vector<std::vector<int>> sparsity_blocks(std::span<const SparseMatrix> operators, Eigen::Index dim);

/// Real CSR matrix with the same affine parametrisation as AffineSparse.
struct RealCsr {
    std::vector<int> outer;
    std::vector<int> inner;
    std::vector<double> values;
    std::vector<std::vector<double>> coefficients;

    explicit RealCsr(const AffineSparse& source);
    RealCsr() = default;
    void update(std::span<const double> amplitudes);
};

class BlockLindblad {
public:
    BlockLindblad(const TimeDependentHamiltonian& hamiltonian, std::span<const SparseOperator> jumps,
                  const DenseMatrix& rho0);
    BlockLindblad(const BlockLindblad&) = delete;
    BlockLindblad& operator=(const BlockLindblad&) = delete;

    std::size_t flat_size() const noexcept { return flat_size_; }
    std::size_t pair_count() const noexcept { return pairs_.size(); }

    Eigen::VectorXcd pack(const DenseMatrix& rho) const;
    DenseMatrix unpack(const Eigen::VectorXcd& flat) const;
    Complex trace(const Eigen::VectorXcd& flat) const;

    /// out = L_t(in).
    void rhs(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

    /// True when the real-symmetric kernel is in use (see rhs_real()).
    bool real_kernel() const noexcept { return real_kernel_; }

private:
    struct Block {
        std::vector<int> indices;
        AffineSparse heff;          // H(t) - (i/2) sum L^dagger L
        AffineSparse heff_adjoint;  // its adjoint
        RealCsr hamiltonian;        // real kernel: H(t) alone
        std::vector<double> loss;   // real kernel: diagonal of sum L^dagger L
    };
    struct Piece {  // jump operator restricted to source -> target block
        int jump;
        int source;
        int target;
        SparseMatrix matrix;
        SparseMatrix adjoint;
        std::vector<std::tuple<int, int, double>> entries;  // (source, target, value), one per column
    };
    struct Feed {
        std::size_t source_pair;
        const Piece* left;
        const Piece* right;
    };
    struct Pair {
        int row_block;
        int col_block;
        std::size_t offset;
        std::vector<Feed> feeds;
    };

    void refresh(double t);
    void rhs_real(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
    void rhs_general(const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

    const TimeDependentHamiltonian* hamiltonian_;
    bool real_kernel_ = false;
    bool refreshed_ = false;
    std::vector<double> current_;
    std::vector<Block> blocks_;
    std::vector<int> block_of_;
    std::vector<int> local_of_;
    std::vector<Piece> pieces_;
    std::vector<Pair> pairs_;
    std::size_t flat_size_ = 0;
    std::vector<double> amplitudes_;
    DenseMatrix scratch_;
};

}  // namespace fredkin::detail
