// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fredkin {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

bool close_rel(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

std::size_t require_index(const HilbertSpace& space, const BasisLabel& label) {
    const auto idx = space.index_of(label);
    if (!idx) throw std::invalid_argument("state " + to_string(label) + " is not in the space");
    return *idx;
}

}  // namespace

void PhysParams::validate() const {
    if (!(g > 0.0)) throw std::invalid_argument("PhysParams: g must be > 0");
    if (!(J >= 0.0)) throw std::invalid_argument("PhysParams: J must be >= 0");
    if (!(delta >= 0.0)) throw std::invalid_argument("PhysParams: delta must be >= 0");
}

double EigenSystem::max_residual(const Eigen::MatrixXd& block) const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        worst = std::max(worst, (block * vectors.col(i) - values(i) * vectors.col(i)).norm());
    }
    return worst;
}

double EigenSystem::orthonormality_defect() const {
    const Eigen::MatrixXd gram = vectors.transpose() * vectors;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

SparseOperator drive_coupling(const HilbertSpace& space, int atom) {
    if (atom != 1 && atom != 3) throw std::invalid_argument("drive_coupling: only atoms 1 and 3 are driven");
    SparseOperator up = atom_transition(space, atom, Level::One, Level::Excited);
    return up + up.adjoint();
}

SparseOperator hopping_coupling(const HilbertSpace& space) {
    SparseOperator total = SparseOperator::zero(space);
    for (int k = 1; k <= 2; ++k) {
        const std::array<Elementary, 2> hop{CavityRaising{k}, CavityLowering{k + 1}};
        SparseOperator term = product_operator(space, hop);
        total += term + term.adjoint();
    }
    return total;
}

SparseOperator atom_cavity_coupling(const HilbertSpace& space) {
    SparseOperator total = SparseOperator::zero(space);
    for (int i = 1; i <= 3; ++i) {
        const std::array<Elementary, 2> absorb{AtomTransition{i, Level::Zero, Level::Excited}, CavityLowering{i}};
        SparseOperator term = product_operator(space, absorb);
        total += term + term.adjoint();
    }
    return total;
}

SparseOperator excited_population(const HilbertSpace& space) {
    SparseOperator total = SparseOperator::zero(space);
    for (int i = 1; i <= 3; ++i) total += atom_transition(space, i, Level::Excited, Level::Excited);
    return total;
}

SparseOperator full_hamiltonian(const HilbertSpace& space, const PhysParams& params, double omega1, double omega3) {
    params.validate();
    const ZenoSplit parts = zeno_split(space, params, omega1, omega3);
    return parts.drive + parts.measurement + params.delta * excited_population(space);
}

ZenoSplit zeno_split(const HilbertSpace& space, const PhysParams& params, double omega1, double omega3) {
    SparseOperator drive = omega1 * drive_coupling(space, 1) + omega3 * drive_coupling(space, 3);
    SparseOperator measurement = params.J * hopping_coupling(space) + params.g * atom_cavity_coupling(space);
    return {std::move(drive), std::move(measurement)};
}

ZenoDecomposition zeno_hamiltonian(const DenseMatrix& drive, const DenseMatrix& measurement, double g,
                                   double tolerance) {
    if (drive.rows() != measurement.rows() || drive.cols() != measurement.cols() || drive.rows() != drive.cols()) {
        throw std::invalid_argument("zeno_hamiltonian: operators must be square and of equal size");
    }
    const double tol = tolerance * g;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(measurement);
    if (solver.info() != Eigen::Success) throw std::runtime_error("zeno_hamiltonian: eigensolver failed");
    const Eigen::VectorXd& w = solver.eigenvalues();
    const DenseMatrix& v = solver.eigenvectors();

    // Cluster consecutive sorted eigenvalues.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= w.size(); ++i) {
        if (i == w.size() || w(i) - w(i - 1) > tol) {
            ranges.emplace_back(start, i);
            start = i;
        }
    }

    ZenoDecomposition out;
    const auto n = drive.rows();
    out.zeno_hamiltonian = DenseMatrix::Zero(n, n);
    out.dark_hamiltonian = DenseMatrix::Zero(n, n);
    for (const auto& [lo, hi] : ranges) {
        const double eta = w.segment(lo, hi - lo).mean();
        if (!out.eigenvalues.empty() && eta - out.eigenvalues.back() < 10.0 * tol) {
            throw std::runtime_error("zeno_hamiltonian: ambiguous eigenvalue clustering");
        }
        const DenseMatrix cols = v.middleCols(lo, hi - lo);
        DenseMatrix p = cols * cols.adjoint();
        const DenseMatrix restricted = p * drive * p;
        out.zeno_hamiltonian += eta * p + restricted;
        if (std::abs(eta) <= tol) {
            out.dark_cluster = out.eigenvalues.size();
            out.dark_hamiltonian = restricted;
        }
        out.eigenvalues.push_back(eta);
        out.projectors.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::array<BasisLabel, 7> resonant_block_basis() {
    return {make_label("011", "000"), make_label("01e", "000"), make_label("010", "001"), make_label("010", "010"),
            make_label("010", "100"), make_label("e10", "000"), make_label("110", "000")};
}

Eigen::Matrix<double, 7, 7> resonant_block(const PhysParams& params, double omega1, double omega3) {
    Eigen::Matrix<double, 7, 7> m = Eigen::Matrix<double, 7, 7>::Zero();
    const std::array<double, 6> upper{omega3, params.g, params.J, params.J, params.g, omega1};
    for (int i = 0; i < 6; ++i) {
        m(i, i + 1) = upper[static_cast<std::size_t>(i)];
        m(i + 1, i) = upper[static_cast<std::size_t>(i)];
    }
    m(1, 1) = params.delta;
    m(5, 5) = params.delta;
    return m;
}

EigenSystem resonant_eigensystem(const PhysParams& params) {
    params.validate();
    if (!close_rel(params.J, params.g, params.g)) {
        throw std::invalid_argument("resonant_eigensystem: closed forms require J = g");
    }
    if (params.delta != 0.0) throw std::invalid_argument("resonant_eigensystem: requires Delta = 0");
    const double g = params.g;
    const double r12 = 1.0 / std::sqrt(12.0);
    EigenSystem sys;
    sys.basis_labels = {"|01e>|000>", "|010>|001>", "|010>|010>", "|010>|100>", "|e10>|000>"};
    sys.values.resize(5);
    sys.values << 0.0, -g, g, -kSqrt3 * g, kSqrt3 * g;
    sys.vectors.resize(5, 5);
    // Columns: |E_1> = |D>, |E_2>, ..., |E_5>.
    sys.vectors.col(0) << 1.0 / kSqrt3, 0.0, -1.0 / kSqrt3, 0.0, 1.0 / kSqrt3;
    sys.vectors.col(1) << -0.5, 0.5, 0.0, -0.5, 0.5;
    sys.vectors.col(2) << -0.5, -0.5, 0.0, 0.5, 0.5;
    sys.vectors.col(3) << -r12, 0.5, -1.0 / kSqrt3, 0.5, -r12;
    sys.vectors.col(4) << r12, 0.5, 1.0 / kSqrt3, 0.5, r12;
    return sys;
}

StateVector dark_state(const HilbertSpace& space) {
    StateVector d = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    d(static_cast<Eigen::Index>(require_index(space, make_label("e10", "000")))) = 1.0 / kSqrt3;
    d(static_cast<Eigen::Index>(require_index(space, make_label("01e", "000")))) = 1.0 / kSqrt3;
    d(static_cast<Eigen::Index>(require_index(space, make_label("010", "010")))) = -1.0 / kSqrt3;
    return d;
}

Eigen::Matrix<double, 7, 7> resonant_dressed_view(const PhysParams& params, double omega1, double omega3) {
    const EigenSystem interior = resonant_eigensystem(params);
    Eigen::Matrix<double, 7, 7> basis = Eigen::Matrix<double, 7, 7>::Zero();
    basis(0, 0) = 1.0;
    basis.block<5, 5>(1, 1) = interior.vectors;
    basis(6, 6) = 1.0;
    return basis.transpose() * resonant_block(params, omega1, omega3) * basis;
}

EffectiveModel3 effective_resonant(const PhysParams& params, double omega1, double omega3) {
    params.validate();
    EffectiveModel3 out;
    out.hamiltonian.setZero();
    out.hamiltonian(0, 2) = out.hamiltonian(2, 0) = omega1 / kSqrt3;
    out.hamiltonian(1, 2) = out.hamiltonian(2, 1) = omega3 / kSqrt3;
    out.outside_zeno_regime = std::max(std::abs(omega1), std::abs(omega3)) / params.g > 0.2;
    return out;
}

// ---------------------------------------------------------------------------

DenseMatrix dispersive_collective_basis(const HilbertSpace& space) {
    auto at = [&](const char* atoms, const char* photons) {
        return static_cast<Eigen::Index>(require_index(space, make_label(atoms, photons)));
    };
    const Eigen::Index e00 = at("e00", "000"), oe0 = at("0e0", "000"), ooe = at("00e", "000");
    const Eigen::Index c1 = at("000", "100"), c2 = at("000", "010"), c3 = at("000", "001");

    DenseMatrix b = DenseMatrix::Zero(static_cast<Eigen::Index>(space.dim()), 6);
    // phi_1, phi_a
    b(e00, 0) = 0.5; b(oe0, 0) = -kSqrt2 / 2.0; b(ooe, 0) = 0.5;
    b(c1, 1) = 0.5;  b(c2, 1) = -kSqrt2 / 2.0;  b(c3, 1) = 0.5;
    // phi_2, phi_b
    b(e00, 2) = 0.5; b(oe0, 2) = kSqrt2 / 2.0;  b(ooe, 2) = 0.5;
    b(c1, 3) = 0.5;  b(c2, 3) = kSqrt2 / 2.0;   b(c3, 3) = 0.5;
    // phi_3, phi_c
    b(e00, 4) = 1.0 / kSqrt2; b(ooe, 4) = -1.0 / kSqrt2;
    b(c1, 5) = 1.0 / kSqrt2;  b(c3, 5) = -1.0 / kSqrt2;
    return b;
}

Eigen::Matrix<double, 6, 6> dispersive_block(const PhysParams& params) {
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    const std::array<double, 3> photon_energy{-kSqrt2 * params.J, kSqrt2 * params.J, 0.0};
    for (int b = 0; b < 3; ++b) {
        const int i = 2 * b;
        m(i, i) = params.delta;
        m(i, i + 1) = m(i + 1, i) = params.g;
        m(i + 1, i + 1) = photon_energy[static_cast<std::size_t>(b)];
    }
    return m;
}

DispersiveSpectrum dispersive_eigensystem(const PhysParams& params) {
    params.validate();
    const double g = params.g, J = params.J, d = params.delta;
    const double s_minus = std::sqrt(4 * g * g + d * d + 2 * kSqrt2 * d * J + 2 * J * J);
    const double s_plus = std::sqrt(4 * g * g + d * d - 2 * kSqrt2 * d * J + 2 * J * J);
    const double r = std::sqrt(4 * g * g + d * d);

    DispersiveSpectrum out;
    out.alpha = d + kSqrt2 * J - s_minus;
    out.beta = d - kSqrt2 * J - s_plus;
    const double a = out.alpha, b = out.beta;
    const double na = std::sqrt(4 * g * g + a * a);
    const double nb = std::sqrt(4 * g * g + b * b);

    EigenSystem& sys = out.system;
    sys.basis_labels = {"phi_1", "phi_a", "phi_2", "phi_b", "phi_3", "phi_c"};
    sys.values.resize(6);
    sys.values << 0.5 * (d - kSqrt2 * J - s_minus), 0.5 * (d - kSqrt2 * J + s_minus),
        0.5 * (d + kSqrt2 * J - s_plus), 0.5 * (d + kSqrt2 * J + s_plus), 0.5 * (d - r), 0.5 * (d + r);
    sys.vectors = Eigen::MatrixXd::Zero(6, 6);
    sys.vectors(0, 0) = a / na;      sys.vectors(1, 0) = 2 * g / na;
    sys.vectors(0, 1) = 2 * g / na;  sys.vectors(1, 1) = -a / na;
    sys.vectors(2, 2) = b / nb;      sys.vectors(3, 2) = 2 * g / nb;
    sys.vectors(2, 3) = 2 * g / nb;  sys.vectors(3, 3) = -b / nb;
    const double lo = std::sqrt((r - d) / (2 * r));
    const double hi = std::sqrt((r + d) / (2 * r));
    sys.vectors(4, 4) = -lo; sys.vectors(5, 4) = hi;
    sys.vectors(4, 5) = hi;  sys.vectors(5, 5) = lo;
    return out;
}

DipoleDipoleModel effective_dispersive(const PhysParams& params, double omega1, double omega3) {
    params.validate();
    if (!close_rel(params.delta, params.J, params.g) || !close_rel(params.J, params.g, params.g)) {
        throw std::invalid_argument("effective_dispersive: requires Delta = J = g");
    }
    const double g = params.g;
    DipoleDipoleModel out;
    out.single << omega1 * omega1 / g, omega1 * omega3 / g, omega1 * omega3 / g, omega3 * omega3 / g;
    out.dual = -0.5 * out.single;
    return out;
}

Eigen::MatrixXd virtual_channel_sum(const EigenSystem& system, const Eigen::MatrixXd& couplings) {
    if (couplings.rows() != system.values.size()) {
        throw std::invalid_argument("virtual_channel_sum: one coupling row per eigenpair expected");
    }
    if ((system.values.array().abs() == 0.0).any()) {
        throw std::invalid_argument("virtual_channel_sum: a channel is resonant (E_i = 0)");
    }
    const Eigen::VectorXd inv = system.values.cwiseInverse();
    return -(couplings.transpose() * inv.asDiagonal() * couplings);
}

Eigen::Matrix2d dispersive_single_channels(const PhysParams& params, double omega1, double omega3) {
    const DispersiveSpectrum spec = dispersive_eigensystem(params);
    // |e00> and |00e> in the collective basis.
    Eigen::Matrix<double, 6, 2> excited;
    excited.col(0) << 0.5, 0.0, 0.5, 0.0, 1.0 / kSqrt2, 0.0;
    excited.col(1) << 0.5, 0.0, 0.5, 0.0, -1.0 / kSqrt2, 0.0;
    excited.col(0) *= omega1;
    excited.col(1) *= omega3;
    const Eigen::MatrixXd c = spec.system.vectors.transpose() * excited;
    return virtual_channel_sum(spec.system, c);
}

Eigen::Matrix2d dispersive_dual_channels(const PhysParams& params, double omega1, double omega3) {
    const Eigen::Matrix<double, 5, 5> interior = resonant_block(params, 0.0, 0.0).block<5, 5>(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> solver(interior);
    EigenSystem sys;
    sys.values = solver.eigenvalues();
    sys.vectors = solver.eigenvectors();
    // Drive maps |110> to Omega1 |e10> (interior slot 4) and |011> to Omega3 |01e> (slot 0).
    Eigen::Matrix<double, 5, 2> excited = Eigen::Matrix<double, 5, 2>::Zero();
    excited(4, 0) = omega1;
    excited(0, 1) = omega3;
    const Eigen::MatrixXd c = sys.vectors.transpose() * excited;
    return virtual_channel_sum(sys, c);
}

}  // namespace fredkin
