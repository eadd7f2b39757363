// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fredkin {

namespace {

constexpr int kAtoms = 3;
constexpr int kModes = 3;

int level_index(Level level) { return static_cast<int>(level); }

char level_char(Level level) {
    switch (level) {
        case Level::Zero: return '0';
        case Level::One: return '1';
        case Level::Excited: return 'e';
    }
    return '?';
}

Level parse_level(char c) {
    switch (c) {
        case '0': return Level::Zero;
        case '1': return Level::One;
        case 'e': return Level::Excited;
        default: throw std::invalid_argument(std::string("make_label: bad atom level '") + c + "'");
    }
}

void check_mode(int k, const char* what) {
    if (k < 1 || k > kModes) {
        throw std::out_of_range(std::string(what) + ": index must be in 1..3, got " + std::to_string(k));
    }
}

// Applies one elementary factor to a label; nullopt when the factor annihilates it.
std::optional<std::pair<double, BasisLabel>> act(const Elementary& factor, BasisLabel label, int fock_cap) {
    return std::visit(
        [&](const auto& f) -> std::optional<std::pair<double, BasisLabel>> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CavityLowering>) {
                int& n = label.photons[static_cast<std::size_t>(f.cavity - 1)];
                if (n == 0) return std::nullopt;
                const double amp = std::sqrt(static_cast<double>(n));
                --n;
                return std::pair{amp, label};
            } else if constexpr (std::is_same_v<T, CavityRaising>) {
                int& n = label.photons[static_cast<std::size_t>(f.cavity - 1)];
                if (n >= fock_cap) return std::nullopt;
                ++n;
                return std::pair{std::sqrt(static_cast<double>(n)), label};
            } else {
                Level& a = label.atoms[static_cast<std::size_t>(f.atom - 1)];
                if (a != f.from) return std::nullopt;
                a = f.to;
                return std::pair{1.0, label};
            }
        },
        factor);
}

void validate(const Elementary& factor) {
    std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, AtomTransition>) {
                check_mode(f.atom, "atom_transition");
            } else {
                check_mode(f.cavity, "cavity operator");
            }
        },
        factor);
}

}  // namespace

BasisLabel make_label(std::string_view atoms, std::string_view photons) {
    if (atoms.size() != kAtoms || photons.size() != kModes) {
        throw std::invalid_argument("make_label: expected three atom levels and three photon numbers");
    }
    BasisLabel label;
    for (std::size_t i = 0; i < 3; ++i) {
        label.atoms[i] = parse_level(atoms[i]);
        if (photons[i] < '0' || photons[i] > '9') {
            throw std::invalid_argument("make_label: photon numbers must be digits");
        }
        label.photons[i] = photons[i] - '0';
    }
    return label;
}

std::string to_string(const BasisLabel& label) {
    std::string out = "|";
    for (Level a : label.atoms) out += level_char(a);
    out += ">|";
    for (int n : label.photons) out += std::to_string(n);
    out += ">";
    return out;
}

int excitation_count(const BasisLabel& label) {
    int c = label.photons[0] + label.photons[1] + label.photons[2];
    c += label.atoms[0] != Level::Zero ? 1 : 0;
    c += label.atoms[2] != Level::Zero ? 1 : 0;
    c += label.atoms[1] == Level::Excited ? 1 : 0;
    return c;
}

struct HilbertSpace::Tables {
    int fock_cap = 0;
    std::optional<int> sector_cap;
    std::vector<BasisLabel> basis;
    // Dense index of every label in the uncapped product space, or -1.
    std::vector<std::int32_t> lookup;

    std::size_t product_index(const BasisLabel& l) const {
        const auto f = static_cast<std::size_t>(fock_cap + 1);
        std::size_t idx = 0;
        for (Level a : l.atoms) idx = idx * 3 + static_cast<std::size_t>(level_index(a));
        for (int n : l.photons) idx = idx * f + static_cast<std::size_t>(n);
        return idx;
    }
};

HilbertSpace::HilbertSpace(std::shared_ptr<const Tables> tables) : tables_(std::move(tables)) {}

std::size_t HilbertSpace::dim() const noexcept { return tables_->basis.size(); }
int HilbertSpace::fock_cap() const noexcept { return tables_->fock_cap; }
std::optional<int> HilbertSpace::sector_cap() const noexcept { return tables_->sector_cap; }
const std::vector<BasisLabel>& HilbertSpace::basis() const noexcept { return tables_->basis; }

const BasisLabel& HilbertSpace::label(std::size_t index) const { return tables_->basis.at(index); }

std::optional<std::size_t> HilbertSpace::index_of(const BasisLabel& label) const {
    for (int n : label.photons) {
        if (n < 0 || n > tables_->fock_cap) return std::nullopt;
    }
    const std::int32_t idx = tables_->lookup[tables_->product_index(label)];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

bool HilbertSpace::operator==(const HilbertSpace& other) const noexcept {
    return tables_ == other.tables_ ||
           (tables_->fock_cap == other.tables_->fock_cap && tables_->sector_cap == other.tables_->sector_cap);
}

HilbertSpace build_space(int fock_cap, std::optional<int> sector_cap) {
    if (fock_cap < 1) {
        throw std::invalid_argument("build_space: fock_cap must be >= 1 to host photon hopping");
    }
    if (fock_cap > 9) {
        throw std::invalid_argument("build_space: fock_cap above 9 is not supported");
    }
    if (sector_cap && *sector_cap < 0) {
        throw std::invalid_argument("build_space: sector_cap must be >= 0");
    }
    auto tables = std::make_shared<HilbertSpace::Tables>();
    tables->fock_cap = fock_cap;
    tables->sector_cap = sector_cap;
    const int f = fock_cap + 1;
    tables->lookup.assign(static_cast<std::size_t>(27 * f * f * f), -1);

    BasisLabel l;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int a2 = 0; a2 < 3; ++a2)
            for (int a3 = 0; a3 < 3; ++a3)
                for (int n1 = 0; n1 < f; ++n1)
                    for (int n2 = 0; n2 < f; ++n2)
                        for (int n3 = 0; n3 < f; ++n3) {
                            l.atoms = {Level(a1), Level(a2), Level(a3)};
                            l.photons = {n1, n2, n3};
                            if (sector_cap && excitation_count(l) > *sector_cap) continue;
                            tables->lookup[tables->product_index(l)] = static_cast<std::int32_t>(tables->basis.size());
                            tables->basis.push_back(l);
                        }
    return HilbertSpace(std::move(tables));
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(HilbertSpace space, SparseMatrix matrix, std::size_t dropped)
    : space_(std::move(space)), matrix_(std::move(matrix)), dropped_(dropped) {
    const auto n = static_cast<Eigen::Index>(space_.dim());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw std::invalid_argument("SparseOperator: matrix shape does not match the space dimension");
    }
    matrix_.makeCompressed();
}

SparseOperator SparseOperator::zero(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.dim());
    return SparseOperator(space, SparseMatrix(n, n));
}

SparseOperator SparseOperator::adjoint() const {
    return SparseOperator(space_, SparseMatrix(matrix_.adjoint()), dropped_);
}

StateVector SparseOperator::apply(const StateVector& psi) const {
    if (psi.size() != matrix_.cols()) throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
    return matrix_ * psi;
}

double SparseOperator::hermiticity_defect() const {
    const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
    double scale = 0.0;
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return scale > 0.0 ? worst / scale : worst;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
    if (!(space_ == other.space_)) throw std::invalid_argument("SparseOperator: spaces differ");
    matrix_ = matrix_ + other.matrix_;
    dropped_ += other.dropped_;
    return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& other) {
    if (!(space_ == other.space_)) throw std::invalid_argument("SparseOperator: spaces differ");
    matrix_ = matrix_ - other.matrix_;
    dropped_ += other.dropped_;
    return *this;
}

SparseOperator& SparseOperator::operator*=(Complex factor) {
    matrix_ *= factor;
    return *this;
}

SparseOperator operator*(const SparseOperator& lhs, const SparseOperator& rhs) {
    if (!(lhs.space_ == rhs.space_)) throw std::invalid_argument("SparseOperator: spaces differ");
    return SparseOperator(lhs.space_, SparseMatrix(lhs.matrix_ * rhs.matrix_));
}

// ---------------------------------------------------------------------------

SparseOperator product_operator(const HilbertSpace& space, std::span<const Elementary> factors, Complex coefficient) {
    for (const auto& f : factors) validate(f);
    const auto n = static_cast<Eigen::Index>(space.dim());
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(space.dim());
    std::size_t dropped = 0;
    for (std::size_t col = 0; col < space.dim(); ++col) {
        BasisLabel label = space.label(col);
        double amp = 1.0;
        bool alive = true;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            auto next = act(*it, label, space.fock_cap());
            if (!next) {
                alive = false;
                break;
            }
            amp *= next->first;
            label = next->second;
        }
        if (!alive) continue;
        const auto row = space.index_of(label);
        if (!row) {
            ++dropped;
            continue;
        }
        triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), coefficient * amp);
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return SparseOperator(space, std::move(m), dropped);
}

SparseOperator cavity_lowering(const HilbertSpace& space, int cavity) {
    const std::array<Elementary, 1> f{CavityLowering{cavity}};
    return product_operator(space, f);
}

SparseOperator atom_transition(const HilbertSpace& space, int atom, Level from, Level to) {
    const std::array<Elementary, 1> f{AtomTransition{atom, from, to}};
    return product_operator(space, f);
}

SparseOperator excitation_counter(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.dim());
    SparseMatrix m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        m.insert(i, i) = static_cast<double>(excitation_count(space.label(static_cast<std::size_t>(i))));
    }
    return SparseOperator(space, std::move(m));
}

std::array<Level, 3> qubit_atoms(int q) {
    if (q < 0 || q > 7) throw std::out_of_range("qubit index must be in 0..7, got " + std::to_string(q));
    const int q2 = (q >> 2) & 1;
    const int q1 = (q >> 1) & 1;
    const int q3 = q & 1;
    return {Level(q1), Level(q2), Level(q3)};
}

StateVector qubit_embedding(const HilbertSpace& space, int q) {
    BasisLabel label;
    label.atoms = qubit_atoms(q);
    const auto idx = space.index_of(label);
    if (!idx) throw std::logic_error("qubit_embedding: qubit label missing from the space");
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(space.dim()));
    psi(static_cast<Eigen::Index>(*idx)) = 1.0;
    return psi;
}

QubitMatrix qubit_extraction(const HilbertSpace& space, const DenseMatrix& op) {
    const auto n = static_cast<Eigen::Index>(space.dim());
    if (op.rows() != n || op.cols() != n) throw std::invalid_argument("qubit_extraction: dimension mismatch");
    QubitMatrix out = QubitMatrix::Zero();
    const int f = space.fock_cap() + 1;
    std::array<std::optional<std::size_t>, 8> idx;
    for (int n1 = 0; n1 < f; ++n1)
        for (int n2 = 0; n2 < f; ++n2)
            for (int n3 = 0; n3 < f; ++n3) {
                for (int q = 0; q < 8; ++q) {
                    BasisLabel l;
                    l.atoms = qubit_atoms(q);
                    l.photons = {n1, n2, n3};
                    idx[static_cast<std::size_t>(q)] = space.index_of(l);
                }
                for (int r = 0; r < 8; ++r) {
                    if (!idx[static_cast<std::size_t>(r)]) continue;
                    for (int c = 0; c < 8; ++c) {
                        if (!idx[static_cast<std::size_t>(c)]) continue;
                        out(r, c) += op(static_cast<Eigen::Index>(*idx[static_cast<std::size_t>(r)]),
                                        static_cast<Eigen::Index>(*idx[static_cast<std::size_t>(c)]));
                    }
                }
            }
    return out;
}

StateVector embed_state(const HilbertSpace& from, const HilbertSpace& to, const StateVector& psi) {
    if (psi.size() != static_cast<Eigen::Index>(from.dim())) throw std::invalid_argument("embed_state: dimension mismatch");
    StateVector out = StateVector::Zero(static_cast<Eigen::Index>(to.dim()));
    for (std::size_t i = 0; i < from.dim(); ++i) {
        const Complex amp = psi(static_cast<Eigen::Index>(i));
        const auto j = to.index_of(from.label(i));
        if (j) {
            out(static_cast<Eigen::Index>(*j)) = amp;
        } else if (std::abs(amp) > 1e-12) {
            throw std::invalid_argument("embed_state: amplitude on " + to_string(from.label(i)) + " has no target");
        }
    }
    return out;
}

}  // namespace fredkin
