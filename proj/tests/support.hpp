// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations shared by the test binaries. They favour clarity
// over speed and never call into the library's own integrators.

#pragma once

#include "fredkin/hilbert.hpp"
#include "fredkin/propagate.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace fredkin::testing {

inline double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Dense Lindblad generator -i[H, rho] + sum L rho L^dagger - 1/2 {L^dagger L, rho}.
inline DenseMatrix lindblad_rhs(const DenseMatrix& H, const std::vector<DenseMatrix>& jumps, const DenseMatrix& rho) {
    const Complex I(0.0, 1.0);
    DenseMatrix out = -I * (H * rho - rho * H);
    for (const auto& L : jumps) {
        const DenseMatrix LdL = L.adjoint() * L;
        out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
    }
    return out;
}

inline std::vector<DenseMatrix> dense_jumps(const HilbertSpace& space, const DecayParams& decay) {
    std::vector<DenseMatrix> out;
    for (const auto& L : jump_operators(space, decay)) out.push_back(L.dense());
    return out;
}

/// Classic RK4 on the dense Lindblad equation with exactly n equal steps.
inline DenseMatrix dense_lindblad_rk4(const TimeDependentHamiltonian& h, const DecayParams& decay,
                                      const DenseMatrix& rho0, double T, std::size_t n) {
    const auto jumps = dense_jumps(h.space(), decay);
    const double dt = T / static_cast<double>(n);
    DenseMatrix rho = rho0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dt * static_cast<double>(k);
        const DenseMatrix H0 = h.at(t).dense(), Hm = h.at(t + dt / 2).dense(), H1 = h.at(t + dt).dense();
        const DenseMatrix k1 = lindblad_rhs(H0, jumps, rho);
        const DenseMatrix k2 = lindblad_rhs(Hm, jumps, rho + dt / 2 * k1);
        const DenseMatrix k3 = lindblad_rhs(Hm, jumps, rho + dt / 2 * k2);
        const DenseMatrix k4 = lindblad_rhs(H1, jumps, rho + dt * k3);
        rho += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return rho;
}

/// exp(-i H T) psi via Eigen's dense matrix exponential.
inline StateVector expm_evolve(const DenseMatrix& H, const StateVector& psi, double T) {
    const DenseMatrix U = (Complex(0.0, -T) * H).exp();
    return U * psi;
}

/// Deterministic pseudo-random density matrix with every entry nonzero.
inline DenseMatrix scrambled_density(Eigen::Index dim, int seed) {
    DenseMatrix A(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double x = static_cast<double>(seed + 1) * (1.3 * static_cast<double>(r) + 0.7 * static_cast<double>(c) + 0.1);
            A(r, c) = Complex(std::sin(x), std::cos(1.7 * x));
        }
    }
    DenseMatrix rho = A * A.adjoint();
    return rho / rho.trace();
}

}  // namespace fredkin::testing
