// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "block_lindblad.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace fredkin::detail {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Restriction of a global operator to rows of one block and columns of another.
SparseMatrix restrict(const SparseMatrix& global, const std::vector<int>& rows, const std::vector<int>& block_of,
                      const std::vector<int>& local_of, int col_block, Eigen::Index cols) {
    std::vector<Triplet> trips;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (SparseMatrix::InnerIterator it(global, rows[r]); it; ++it) {
            const auto c = static_cast<std::size_t>(it.col());
            if (block_of[c] == col_block) trips.emplace_back(static_cast<int>(r), local_of[c], it.value());
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(rows.size()), cols);
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

}  // namespace

AffineSparse::AffineSparse(std::span<const SparseMatrix> parts) {
    if (parts.empty()) throw std::invalid_argument("AffineSparse: at least one part required");
    const Eigen::Index rows = parts[0].rows(), cols = parts[0].cols();
    std::vector<Triplet> pattern;
    for (const auto& p : parts) {
        if (p.rows() != rows || p.cols() != cols) throw std::invalid_argument("AffineSparse: shape mismatch");
        for (Eigen::Index r = 0; r < p.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(p, r); it; ++it) pattern.emplace_back(it.row(), it.col(), 1.0);
        }
    }
    matrix_.resize(rows, cols);
    matrix_.setFromTriplets(pattern.begin(), pattern.end());
    matrix_.makeCompressed();

    const auto nnz = matrix_.nonZeros();
    const auto* outer = matrix_.outerIndexPtr();
    const auto* inner = matrix_.innerIndexPtr();
    for (const auto& p : parts) {
        Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(nnz);
        for (Eigen::Index r = 0; r < p.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(p, r); it; ++it) {
                const auto* begin = inner + outer[r];
                const auto* end = inner + outer[r + 1];
                const auto* pos = std::lower_bound(begin, end, static_cast<int>(it.col()));
                coeff(pos - inner) += it.value();
            }
        }
        coefficients_.push_back(std::move(coeff));
    }
    update({});
}

void AffineSparse::update(std::span<const double> amplitudes) {
    Eigen::Map<Eigen::VectorXcd> values(matrix_.valuePtr(), matrix_.nonZeros());
    values = coefficients_[0];
    const std::size_t n = std::min(amplitudes.size(), coefficients_.size() - 1);
    for (std::size_t k = 0; k < n; ++k) {
        if (amplitudes[k] != 0.0) values += amplitudes[k] * coefficients_[k + 1];
    }
}

RealCsr::RealCsr(const AffineSparse& source) {
    const auto& m = source.matrix();
    outer.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
    inner.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
    for (const auto& c : source.coefficients()) {
        std::vector<double> re(static_cast<std::size_t>(c.size()));
        for (Eigen::Index k = 0; k < c.size(); ++k) re[static_cast<std::size_t>(k)] = c(k).real();
        coefficients.push_back(std::move(re));
    }
    update({});
}

void RealCsr::update(std::span<const double> amplitudes) {
    values = coefficients[0];
    const std::size_t n = std::min(amplitudes.size(), coefficients.size() - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = amplitudes[k];
        if (a == 0.0) continue;
        const auto& c = coefficients[k + 1];
        for (std::size_t p = 0; p < values.size(); ++p) values[p] += a * c[p];
    }
}

std::vector<std::size_t> sample_steps(std::size_t steps, std::size_t samples) {
    const std::size_t count = std::clamp<std::size_t>(samples, 2, steps + 1);
    std::vector<std::size_t> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = (k * steps + (count - 1) / 2) / (count - 1);
    return out;
}

void amplitudes_at(const TimeDependentHamiltonian& h, double t, std::vector<double>& out) {
    const auto& terms = h.terms();
    out.resize(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) out[k] = terms[k].amplitude(t);
}

std::vector<std::vector<int>> sparsity_blocks(std::span<const SparseMatrix> operators, Eigen::Index dim) {
    std::vector<int> parent(static_cast<std::size_t>(dim));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& op : operators) {
        for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(op, r); it; ++it) {
                const int a = find(static_cast<int>(it.row())), b = find(static_cast<int>(it.col()));
                if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(dim); ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

// ---------------------------------------------------------------------------

BlockLindblad::BlockLindblad(const TimeDependentHamiltonian& hamiltonian, std::span<const SparseOperator> jumps,
                             const DenseMatrix& rho0)
    : hamiltonian_(&hamiltonian) {
    const auto dim = static_cast<Eigen::Index>(hamiltonian.space().dim());
    if (rho0.rows() != dim || rho0.cols() != dim) throw std::invalid_argument("evolve_density: rho0 has wrong size");

    std::vector<SparseMatrix> generators{hamiltonian.static_part().matrix()};
    for (const auto& term : hamiltonian.terms()) generators.push_back(term.op.matrix());
    const auto groups = sparsity_blocks(generators, dim);

    block_of_.assign(static_cast<std::size_t>(dim), -1);
    local_of_.assign(static_cast<std::size_t>(dim), -1);
    for (std::size_t b = 0; b < groups.size(); ++b) {
        for (std::size_t l = 0; l < groups[b].size(); ++l) {
            block_of_[static_cast<std::size_t>(groups[b][l])] = static_cast<int>(b);
            local_of_[static_cast<std::size_t>(groups[b][l])] = static_cast<int>(l);
        }
    }

    SparseMatrix loss(dim, dim);
    for (const auto& L : jumps) {
        const SparseMatrix adj(L.matrix().adjoint());
        const SparseMatrix term = adj * L.matrix();
        loss += term;
    }
    for (Eigen::Index r = 0; r < loss.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(loss, r); it; ++it) {
            if (block_of_[static_cast<std::size_t>(it.row())] != block_of_[static_cast<std::size_t>(it.col())]) {
                throw std::logic_error("evolve_density: sum L^dagger L couples Hamiltonian blocks");
            }
        }
    }
    const SparseMatrix base = hamiltonian.static_part().matrix() - Complex(0.0, 0.5) * loss;

    // The real kernel needs real symmetric H parts, a real diagonal loss term and
    // jump operators with at most one real entry per column.
    auto real_symmetric = [](const SparseMatrix& m) {
        const SparseMatrix t(m.transpose());
        return m.imag().norm() == 0.0 && (m - t).norm() == 0.0;
    };
    real_kernel_ = real_symmetric(hamiltonian.static_part().matrix()) && loss.imag().norm() == 0.0;
    for (const auto& term : hamiltonian.terms()) real_kernel_ = real_kernel_ && real_symmetric(term.op.matrix());
    for (Eigen::Index r = 0; r < loss.outerSize() && real_kernel_; ++r) {
        for (SparseMatrix::InnerIterator it(loss, r); it; ++it) real_kernel_ = real_kernel_ && it.row() == it.col();
    }
    for (const auto& L : jumps) {
        const SparseMatrix cols(L.matrix().transpose());
        for (Eigen::Index c = 0; c < cols.outerSize() && real_kernel_; ++c) {
            int count = 0;
            for (SparseMatrix::InnerIterator it(cols, c); it; ++it) {
                ++count;
                real_kernel_ = real_kernel_ && it.value().imag() == 0.0;
            }
            real_kernel_ = real_kernel_ && count <= 1;
        }
    }

    for (std::size_t b = 0; b < groups.size(); ++b) {
        const auto& idx = groups[b];
        const auto n = static_cast<Eigen::Index>(idx.size());
        const int bi = static_cast<int>(b);
        std::vector<SparseMatrix> parts{restrict(base, idx, block_of_, local_of_, bi, n)};
        for (const auto& term : hamiltonian.terms()) {
            parts.push_back(restrict(term.op.matrix(), idx, block_of_, local_of_, bi, n));
        }
        std::vector<SparseMatrix> adjoints;
        for (const auto& p : parts) adjoints.emplace_back(p.adjoint());
        Block block{idx, AffineSparse(parts), AffineSparse(adjoints), {}, {}};
        if (real_kernel_) {
            std::vector<SparseMatrix> hparts{restrict(hamiltonian.static_part().matrix(), idx, block_of_, local_of_, bi, n)};
            for (std::size_t k = 1; k < parts.size(); ++k) hparts.push_back(parts[k]);
            block.hamiltonian = RealCsr(AffineSparse(hparts));
            for (const int g : idx) block.loss.push_back(loss.coeff(g, g).real());
        }
        blocks_.push_back(std::move(block));
    }

    // Jump operators split into block-to-block pieces.
    std::map<std::tuple<int, int, int>, std::vector<Triplet>> piece_trips;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        const auto& m = jumps[j].matrix();
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
                const auto row = static_cast<std::size_t>(it.row()), col = static_cast<std::size_t>(it.col());
                piece_trips[{static_cast<int>(j), block_of_[col], block_of_[row]}].emplace_back(
                    local_of_[row], local_of_[col], it.value());
            }
        }
    }
    for (auto& [key, trips] : piece_trips) {
        const auto [j, source, target] = key;
        SparseMatrix m(static_cast<Eigen::Index>(groups[static_cast<std::size_t>(target)].size()),
                       static_cast<Eigen::Index>(groups[static_cast<std::size_t>(source)].size()));
        m.setFromTriplets(trips.begin(), trips.end());
        m.makeCompressed();
        SparseMatrix adj(m.adjoint());
        std::vector<std::tuple<int, int, double>> entries;
        for (const auto& tr : trips) entries.emplace_back(tr.col(), tr.row(), tr.value().real());
        std::sort(entries.begin(), entries.end());
        pieces_.push_back({j, source, target, std::move(m), std::move(adj), std::move(entries)});
    }

    // Block pairs reachable from the support of rho0.
    std::map<std::pair<int, int>, std::size_t> active;
    std::deque<std::pair<int, int>> queue;
    auto visit = [&](int a, int c) {
        if (active.emplace(std::pair{a, c}, 0).second) queue.emplace_back(a, c);
    };
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (rho0(r, c) != Complex(0.0)) visit(block_of_[static_cast<std::size_t>(r)], block_of_[static_cast<std::size_t>(c)]);
        }
    }
    while (!queue.empty()) {
        const auto [i, k] = queue.front();
        queue.pop_front();
        for (const auto& p : pieces_) {
            if (p.source != i) continue;
            for (const auto& q : pieces_) {
                if (q.jump == p.jump && q.source == k) visit(p.target, q.target);
            }
        }
    }

    for (auto& [key, index] : active) {
        index = pairs_.size();
        pairs_.push_back({key.first, key.second, flat_size_, {}});
        flat_size_ += groups[static_cast<std::size_t>(key.first)].size() * groups[static_cast<std::size_t>(key.second)].size();
    }
    for (auto& pair : pairs_) {
        for (const auto& p : pieces_) {
            if (p.target != pair.row_block) continue;
            for (const auto& q : pieces_) {
                if (q.jump != p.jump || q.target != pair.col_block) continue;
                const auto src = active.find({p.source, q.source});
                if (src != active.end()) pair.feeds.push_back({src->second, &p, &q});
            }
        }
    }
}

Eigen::VectorXcd BlockLindblad::pack(const DenseMatrix& rho) const {
    Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(flat_size_));
    for (const auto& pair : pairs_) {
        const auto& rows = blocks_[static_cast<std::size_t>(pair.row_block)].indices;
        const auto& cols = blocks_[static_cast<std::size_t>(pair.col_block)].indices;
        Eigen::Map<DenseMatrix> X(flat.data() + pair.offset, static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho(rows[r], cols[c]);
            }
        }
    }
    return flat;
}

DenseMatrix BlockLindblad::unpack(const Eigen::VectorXcd& flat) const {
    const auto dim = static_cast<Eigen::Index>(block_of_.size());
    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    for (const auto& pair : pairs_) {
        const auto& rows = blocks_[static_cast<std::size_t>(pair.row_block)].indices;
        const auto& cols = blocks_[static_cast<std::size_t>(pair.col_block)].indices;
        Eigen::Map<const DenseMatrix> X(flat.data() + pair.offset, static_cast<Eigen::Index>(rows.size()),
                                        static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                rho(rows[r], cols[c]) = X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return rho;
}

Complex BlockLindblad::trace(const Eigen::VectorXcd& flat) const {
    Complex tr = 0.0;
    for (const auto& pair : pairs_) {
        if (pair.row_block != pair.col_block) continue;
        const auto n = static_cast<Eigen::Index>(blocks_[static_cast<std::size_t>(pair.row_block)].indices.size());
        tr += Eigen::Map<const DenseMatrix>(flat.data() + pair.offset, n, n).trace();
    }
    return tr;
}

void BlockLindblad::refresh(double t) {
    const std::vector<double> previous = amplitudes_;
    amplitudes_at(*hamiltonian_, t, amplitudes_);
    if (refreshed_ && previous == amplitudes_) return;
    refreshed_ = true;
    for (auto& block : blocks_) {
        if (real_kernel_) {
            block.hamiltonian.update(amplitudes_);
        } else {
            block.heff.update(amplitudes_);
            block.heff_adjoint.update(amplitudes_);
        }
    }
}

void BlockLindblad::rhs(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    refresh(t);
    if (real_kernel_) {
        rhs_real(in, out);
    } else {
        rhs_general(in, out);
    }
}

// Y = -i (H_i X - X H_j) - (1/2)(g_i + g_j) o X + sum L X L^T, with H real symmetric,
// g the loss diagonal and each L a scaled partial permutation.
void BlockLindblad::rhs_real(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    for (const auto& pair : pairs_) {
        const auto& bi = blocks_[static_cast<std::size_t>(pair.row_block)];
        const auto& bj = blocks_[static_cast<std::size_t>(pair.col_block)];
        const auto ni = static_cast<std::ptrdiff_t>(bi.indices.size());
        const auto nj = static_cast<std::ptrdiff_t>(bj.indices.size());
        const Complex* X = in.data() + pair.offset;
        Complex* Y = out.data() + pair.offset;
        const RealCsr& hi = bi.hamiltonian;
        const RealCsr& hj = bj.hamiltonian;

        for (std::ptrdiff_t c = 0; c < nj; ++c) {
            const Complex* x = X + c * ni;
            Complex* y = Y + c * ni;
            for (std::ptrdiff_t r = 0; r < ni; ++r) {
                Complex sum = 0.0;
                for (int p = hi.outer[static_cast<std::size_t>(r)]; p < hi.outer[static_cast<std::size_t>(r) + 1]; ++p) {
                    sum += hi.values[static_cast<std::size_t>(p)] * x[hi.inner[static_cast<std::size_t>(p)]];
                }
                y[r] = sum;
            }
            for (int p = hj.outer[static_cast<std::size_t>(c)]; p < hj.outer[static_cast<std::size_t>(c) + 1]; ++p) {
                const double v = hj.values[static_cast<std::size_t>(p)];
                const Complex* xk = X + static_cast<std::ptrdiff_t>(hj.inner[static_cast<std::size_t>(p)]) * ni;
                for (std::ptrdiff_t r = 0; r < ni; ++r) y[r] -= v * xk[r];
            }
            const double gc = bj.loss[static_cast<std::size_t>(c)];
            for (std::ptrdiff_t r = 0; r < ni; ++r) {
                const double damp = 0.5 * (bi.loss[static_cast<std::size_t>(r)] + gc);
                y[r] = Complex(y[r].imag() - damp * x[r].real(), -y[r].real() - damp * x[r].imag());
            }
        }

        for (const auto& feed : pair.feeds) {
            const auto& src = pairs_[feed.source_pair];
            const auto si = static_cast<std::ptrdiff_t>(blocks_[static_cast<std::size_t>(src.row_block)].indices.size());
            const Complex* S = in.data() + src.offset;
            for (const auto& [sc, tc, vc] : feed.right->entries) {
                const Complex* s = S + static_cast<std::ptrdiff_t>(sc) * si;
                Complex* y = Y + static_cast<std::ptrdiff_t>(tc) * ni;
                for (const auto& [sr, tr, vr] : feed.left->entries) y[tr] += (vr * vc) * s[sr];
            }
        }
    }
}

void BlockLindblad::rhs_general(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    const Complex minus_i(0.0, -1.0);
    for (const auto& pair : pairs_) {
        const auto& bi = blocks_[static_cast<std::size_t>(pair.row_block)];
        const auto& bj = blocks_[static_cast<std::size_t>(pair.col_block)];
        const auto ni = static_cast<Eigen::Index>(bi.indices.size());
        const auto nj = static_cast<Eigen::Index>(bj.indices.size());
        Eigen::Map<const DenseMatrix> X(in.data() + pair.offset, ni, nj);
        Eigen::Map<DenseMatrix> Y(out.data() + pair.offset, ni, nj);
        Y.noalias() = bi.heff.matrix() * X;
        Y.noalias() -= X * bj.heff_adjoint.matrix();
        Y *= minus_i;
        for (const auto& feed : pair.feeds) {
            const auto& src = pairs_[feed.source_pair];
            const auto si = static_cast<Eigen::Index>(blocks_[static_cast<std::size_t>(src.row_block)].indices.size());
            const auto sj = static_cast<Eigen::Index>(blocks_[static_cast<std::size_t>(src.col_block)].indices.size());
            Eigen::Map<const DenseMatrix> S(in.data() + src.offset, si, sj);
            scratch_.noalias() = feed.left->matrix * S;
            Y.noalias() += scratch_ * feed.right->adjoint;
        }
    }
}

}  // namespace fredkin::detail
