// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/propagate.hpp"

#include "block_lindblad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fredkin {

namespace {

constexpr double kDriftLimit = 1e-4;
constexpr Eigen::Index kDenseNormLimit = 1500;

double operator_norm(const SparseOperator& op) {
    const auto& m = op.matrix();
    if (m.nonZeros() == 0) return 0.0;
    if (m.rows() <= kDenseNormLimit && op.hermiticity_defect() < 1e-12) {
        const Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(op.dense(), Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    double worst = 0.0;  // Gershgorin row bound
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) row += std::abs(it.value());
        worst = std::max(worst, row);
    }
    return worst;
}

struct StepPlan {
    std::size_t steps = 0;
    double h = 0.0;
    std::vector<std::size_t> marks;
};

StepPlan plan_steps(const TimeDependentHamiltonian& hamiltonian, double T, const EvolveOptions& options) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("evolution time must be finite and >= 0");
    if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const double scale = hamiltonian.norm_scale();
    if (options.dt * scale > options.step_safety) {
        std::ostringstream msg;
        msg << "dt = " << options.dt << " exceeds " << options.step_safety << " / ||H|| = "
            << options.step_safety / scale << " (||H|| bound " << scale << ")";
        throw std::invalid_argument(msg.str());
    }
    StepPlan plan;
    if (T == 0.0) {
        plan.marks = {0};
        return plan;
    }
    plan.steps = static_cast<std::size_t>(std::ceil(T / options.dt - 1e-9));
    plan.steps = std::max<std::size_t>(plan.steps, 1);
    plan.h = T / static_cast<double>(plan.steps);
    plan.marks = detail::sample_steps(plan.steps, options.samples);
    return plan;
}

[[noreturn]] void drift_abort(const char* what, double drift, double t, double h) {
    std::ostringstream msg;
    msg << what << " drift " << drift << " at t = " << t << " with dt = " << h << "; reduce the step size";
    throw IntegrationError(msg.str());
}

// Classical RK4 on a flat vector. `sample(k, y)` is called at every marked step.
template <class Rhs, class Sample>
void rk4(Rhs&& rhs, Eigen::VectorXcd& y, const StepPlan& plan, Sample&& sample) {
    const auto n = y.size();
    Eigen::VectorXcd k(n), stage(n), acc(n);
    std::size_t next = 0;
    if (plan.marks[next] == 0) sample(next++, y);
    const double h = plan.h;
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double t = static_cast<double>(s) * h;
        rhs(t, y, k);
        acc = k;
        stage = y + (0.5 * h) * k;
        rhs(t + 0.5 * h, stage, k);
        acc += 2.0 * k;
        stage = y + (0.5 * h) * k;
        rhs(t + 0.5 * h, stage, k);
        acc += 2.0 * k;
        stage = y + h * k;
        rhs(t + h, stage, k);
        acc += k;
        y += (h / 6.0) * acc;
        if (next < plan.marks.size() && plan.marks[next] == s + 1) sample(next++, y);
    }
}

// Ket evolution of the columns of `kets`, calling sample(k, Y) at each mark.
template <class Sample>
void run_kets(const TimeDependentHamiltonian& hamiltonian, const DenseMatrix& kets, const StepPlan& plan,
              const EvolveOptions& options, Sample&& sample) {
    const auto dim = kets.rows();
    const auto cols = kets.cols();
    if (dim != static_cast<Eigen::Index>(hamiltonian.space().dim())) {
        throw std::invalid_argument("initial state has wrong dimension");
    }
    const Eigen::VectorXd norms0 = kets.colwise().norm();
    auto check = [&](std::size_t k, const DenseMatrix& Y) {
        const Eigen::VectorXd norms = Y.colwise().norm();
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (norms0(c) == 0.0) continue;
            const double drift = std::abs(norms(c) / norms0(c) - 1.0);
            if (!(drift <= kDriftLimit)) drift_abort("norm", drift, static_cast<double>(plan.marks[k]) * plan.h, plan.h);
        }
        sample(k, Y);
    };

    std::vector<SparseMatrix> parts{hamiltonian.static_part().matrix()};
    for (const auto& term : hamiltonian.terms()) parts.push_back(term.op.matrix());

    // Constant generator: the RK4 step is a fixed matrix, so sample intervals can be powered.
    const double nnz = static_cast<double>(detail::AffineSparse(parts).matrix().nonZeros());
    const double step_cost = 4.0 * static_cast<double>(plan.steps) * nnz * static_cast<double>(cols);
    std::map<std::size_t, int> intervals;
    for (std::size_t k = 1; k < plan.marks.size(); ++k) intervals[plan.marks[k] - plan.marks[k - 1]] = 0;
    const double d3 = std::pow(static_cast<double>(dim), 3.0);
    double power_cost = static_cast<double>(plan.marks.size()) * static_cast<double>(dim * dim * cols);
    for (const auto& [len, unused] : intervals) power_cost += (2.0 * std::log2(static_cast<double>(len) + 1.0) + 4.0) * d3;
    if (options.map_powering && hamiltonian.is_constant() && plan.steps > 0 && power_cost < step_cost) {
        std::vector<double> amps;
        detail::amplitudes_at(hamiltonian, 0.0, amps);
        detail::AffineSparse h(parts);
        h.update(amps);
        const DenseMatrix A = Complex(0.0, -plan.h) * DenseMatrix(h.matrix());
        const DenseMatrix I = DenseMatrix::Identity(dim, dim);
        const DenseMatrix step = I + A * (I + 0.5 * A * (I + (1.0 / 3.0) * A * (I + 0.25 * A)));
        std::map<std::size_t, DenseMatrix> powers;
        for (const auto& [len, unused] : intervals) {
            DenseMatrix result = I, base = step;
            for (std::size_t e = len; e > 0; e >>= 1) {
                if (e & 1U) result = result * base;
                if (e > 1) base = base * base;
            }
            powers.emplace(len, std::move(result));
        }
        DenseMatrix Y = kets;
        check(0, Y);
        for (std::size_t k = 1; k < plan.marks.size(); ++k) {
            Y = powers.at(plan.marks[k] - plan.marks[k - 1]) * Y;
            check(k, Y);
        }
        return;
    }

    detail::AffineSparse h(parts);
    std::vector<double> amps;
    auto rhs = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        detail::amplitudes_at(hamiltonian, t, amps);
        h.update(amps);
        Eigen::Map<const DenseMatrix> X(in.data(), dim, cols);
        Eigen::Map<DenseMatrix> Y(out.data(), dim, cols);
        Y.noalias() = h.matrix() * X;
        Y *= Complex(0.0, -1.0);
    };
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(kets.data(), dim * cols);
    rk4(rhs, y, plan, [&](std::size_t k, const Eigen::VectorXcd& flat) {
        check(k, Eigen::Map<const DenseMatrix>(flat.data(), dim, cols));
    });
}

std::vector<double> sample_times(const StepPlan& plan, double T) {
    std::vector<double> times;
    for (const auto m : plan.marks) times.push_back(m == plan.steps ? T : static_cast<double>(m) * plan.h);
    return times;
}

}  // namespace

void DecayParams::validate() const {
    if (!(kappa >= 0.0) || !(gamma >= 0.0)) throw std::invalid_argument("DecayParams: rates must be >= 0");
}

std::vector<SparseOperator> jump_operators(const HilbertSpace& space, const DecayParams& decay) {
    decay.validate();
    std::vector<SparseOperator> jumps;
    if (decay.kappa > 0.0) {
        for (int k = 1; k <= 3; ++k) jumps.push_back(std::sqrt(decay.kappa) * cavity_lowering(space, k));
    }
    if (decay.gamma > 0.0) {
        const double rate = std::sqrt(0.5 * decay.gamma);
        for (const Level to : {Level::Zero, Level::One}) {
            for (int n = 1; n <= 3; ++n) jumps.push_back(rate * atom_transition(space, n, Level::Excited, to));
        }
    }
    return jumps;
}

// ---------------------------------------------------------------------------

TimeDependentHamiltonian::TimeDependentHamiltonian(SparseOperator static_part)
    : static_(std::move(static_part)), static_norm_(operator_norm(static_)) {}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_term(SparseOperator op, std::function<double(double)> amplitude,
                                                             double peak, bool constant) {
    if (!(op.space() == static_.space())) throw std::invalid_argument("add_term: operator on a different space");
    if (!amplitude) throw std::invalid_argument("add_term: empty amplitude function");
    term_norms_.push_back(operator_norm(op));
    terms_.push_back({std::move(op), std::move(amplitude), std::abs(peak), constant});
    return *this;
}

bool TimeDependentHamiltonian::is_constant() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.constant; });
}

SparseOperator TimeDependentHamiltonian::at(double t) const {
    SparseOperator h = static_;
    for (const auto& term : terms_) h += term.amplitude(t) * term.op;
    return h;
}

double TimeDependentHamiltonian::norm_scale() const {
    double scale = static_norm_;
    for (std::size_t k = 0; k < terms_.size(); ++k) scale += terms_[k].peak * term_norms_[k];
    return scale;
}

TimeDependentHamiltonian gate_hamiltonian(const HilbertSpace& space, const PhysParams& params,
                                          const DriveSchedule& schedule) {
    params.validate();
    SparseOperator fixed = zeno_split(space, params, 0.0, 0.0).measurement;
    if (params.delta != 0.0) fixed += params.delta * excited_population(space);
    TimeDependentHamiltonian h(std::move(fixed));
    const bool constant = schedule.kind() == PulseKind::Constant;
    const double peak = constant ? schedule.amplitude() : 2.0 * schedule.amplitude();
    h.add_term(drive_coupling(space, 1), [schedule](double t) { return schedule.omega1(t); }, peak, constant);
    h.add_term(drive_coupling(space, 3), [schedule](double t) { return schedule.omega3(t); }, peak, constant);
    return h;
}

// ---------------------------------------------------------------------------

Trajectory evolve_state(const TimeDependentHamiltonian& hamiltonian, const StateVector& psi0, double T,
                        const EvolveOptions& options) {
    const StepPlan plan = plan_steps(hamiltonian, T, options);
    Trajectory traj{hamiltonian.space(), sample_times(plan, T), {}, {}, plan.h, plan.steps};
    traj.states.resize(plan.marks.size());
    run_kets(hamiltonian, psi0, plan, options,
             [&](std::size_t k, const auto& Y) { traj.states[k] = Y.col(0); });
    return traj;
}

DenseMatrix evolve_states_final(const TimeDependentHamiltonian& hamiltonian, const DenseMatrix& kets, double T,
                                const EvolveOptions& options) {
    EvolveOptions final_only = options;
    final_only.samples = 2;
    const StepPlan plan = plan_steps(hamiltonian, T, final_only);
    DenseMatrix out = kets;
    run_kets(hamiltonian, kets, plan, final_only, [&](std::size_t, const auto& Y) { out = Y; });
    return out;
}

Trajectory evolve_density(const TimeDependentHamiltonian& hamiltonian, const DecayParams& decay,
                          const DenseMatrix& rho0, double T, const EvolveOptions& options) {
    const StepPlan plan = plan_steps(hamiltonian, T, options);
    const auto jumps = jump_operators(hamiltonian.space(), decay);
    detail::BlockLindblad engine(hamiltonian, jumps, rho0);

    Trajectory traj{hamiltonian.space(), sample_times(plan, T), {}, {}, plan.h, plan.steps};
    traj.densities.resize(plan.marks.size());
    Eigen::VectorXcd y = engine.pack(rho0);
    const Complex trace0 = engine.trace(y);
    auto sample = [&](std::size_t k, const Eigen::VectorXcd& flat) {
        const double drift = std::abs(engine.trace(flat) - trace0);
        if (!(drift <= kDriftLimit)) drift_abort("trace", drift, traj.times[k], plan.h);
        traj.densities[k] = engine.unpack(flat);
    };
    auto rhs = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { engine.rhs(t, in, out); };
    rk4(rhs, y, plan, sample);
    return traj;
}

PopulationTable population_series(const Trajectory& trajectory, std::span<const BasisLabel> targets) {
    std::vector<Eigen::Index> idx;
    PopulationTable table;
    for (const auto& label : targets) {
        const auto i = trajectory.space.index_of(label);
        if (!i) throw std::invalid_argument("population_series: " + to_string(label) + " not in the space");
        idx.push_back(static_cast<Eigen::Index>(*i));
        table.labels.push_back(to_string(label));
    }
    table.times = trajectory.times;
    const auto rows = static_cast<Eigen::Index>(trajectory.times.size());
    table.values.resize(rows, static_cast<Eigen::Index>(idx.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const auto s = static_cast<std::size_t>(r);
            table.values(r, static_cast<Eigen::Index>(c)) =
                trajectory.is_density() ? trajectory.densities[s](idx[c], idx[c]).real()
                                        : std::norm(trajectory.states[s](idx[c]));
        }
    }
    return table;
}

}  // namespace fredkin
