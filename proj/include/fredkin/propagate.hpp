// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file propagate.hpp
 * @brief Fixed-step RK4 integration of Schrödinger and Lindblad dynamics with
 *        time-dependent drive amplitudes.
 *
 * Drive amplitudes are evaluated at the RK4 stage times t, t + dt/2 and t + dt.
 * The step is shortened to T / ceil(T / dt) so that the last step lands on T.
 */

#pragma once

#include "fredkin/hilbert.hpp"
#include "fredkin/model.hpp"
#include "fredkin/pulses.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fredkin {

/// Cavity decay kappa and total atomic decay gamma, split evenly into e->0 and e->1.
struct DecayParams {
    double kappa = 0.0;
    double gamma = 0.0;

    void validate() const;
    bool is_zero() const noexcept { return kappa == 0.0 && gamma == 0.0; }
};

/**
 * Lindblad operators sqrt(kappa) a_k, sqrt(gamma/2) |0><e|_n, sqrt(gamma/2) |1><e|_n,
 * in that order. Operators with a zero rate are omitted.
 */
std::vector<SparseOperator> jump_operators(const HilbertSpace& space, const DecayParams& decay);

/// H(t) = H_static + sum_k f_k(t) D_k with real amplitude functions f_k.
class TimeDependentHamiltonian {
public:
    struct Term {
        SparseOperator op;
        std::function<double(double)> amplitude;
        double peak = 0.0;       ///< bound on |f_k(t)| used for the step-size check
        bool constant = false;
    };

    explicit TimeDependentHamiltonian(SparseOperator static_part);

    TimeDependentHamiltonian& add_term(SparseOperator op, std::function<double(double)> amplitude, double peak,
                                       bool constant = false);

    const HilbertSpace& space() const noexcept { return static_.space(); }
    const SparseOperator& static_part() const noexcept { return static_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_constant() const noexcept;
    SparseOperator at(double t) const;

    /// Upper bound on ||H(t)||: spectral norm of the static part plus peak-weighted term norms.
    double norm_scale() const;

private:
    SparseOperator static_;
    double static_norm_ = 0.0;
    std::vector<Term> terms_;
    std::vector<double> term_norms_;
};

/// Gate Hamiltonian: H2 + Delta sum|e><e| static, drives Omega1(t), Omega3(t) from the schedule.
TimeDependentHamiltonian gate_hamiltonian(const HilbertSpace& space, const PhysParams& params,
                                          const DriveSchedule& schedule);

struct EvolveOptions {
    double dt = 0.01;
    std::size_t samples = 500;      ///< evenly spaced, including t = 0 and t = T
    bool map_powering = true;       ///< constant ket runs: power the one-step RK4 map
    double step_safety = 0.05;      ///< require dt * norm_scale <= step_safety
};

/// Raised when the norm or trace drifts by more than 1e-4.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Trajectory {
    HilbertSpace space;
    std::vector<double> times;
    std::vector<StateVector> states;      ///< filled by evolve_state
    std::vector<DenseMatrix> densities;   ///< filled by evolve_density
    double dt = 0.0;                      ///< step actually used
    std::size_t steps = 0;

    bool is_density() const noexcept { return !densities.empty(); }
};

/// Integrates i dpsi/dt = H(t) psi on [0, T].
Trajectory evolve_state(const TimeDependentHamiltonian& hamiltonian, const StateVector& psi0, double T,
                        const EvolveOptions& options = {});

/// Evolves every column of `kets` to time T and returns only the final columns.
DenseMatrix evolve_states_final(const TimeDependentHamiltonian& hamiltonian, const DenseMatrix& kets, double T,
                                const EvolveOptions& options = {});

/**
 * Integrates the Lindblad equation on [0, T]. Any complex rho0 is accepted; the
 * trace check compares against trace(rho0). Internally rho is split into the
 * block pairs reachable from rho0 (see block_lindblad.hpp).
 */
Trajectory evolve_density(const TimeDependentHamiltonian& hamiltonian, const DecayParams& decay,
                          const DenseMatrix& rho0, double T, const EvolveOptions& options = {});

struct PopulationTable {
    std::vector<double> times;
    std::vector<std::string> labels;
    Eigen::MatrixXd values;  ///< one row per time, one column per label
};

/// |<target|psi(t)>|^2 or <target|rho(t)|target>. Throws for labels absent from the space.
PopulationTable population_series(const Trajectory& trajectory, std::span<const BasisLabel> targets);

}  // namespace fredkin
