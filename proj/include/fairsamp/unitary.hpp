// Copyright 2026 The fairsamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Dense unitaries of small circuits.
 *
 * Every gate is expanded to its full local matrix and applied to each column
 * through a generic gather/scatter over its operands. This path shares no
 * code with the statevector kernels, so each can serve as an oracle for the
 * other.
 */
#pragma once

#include "circuit.hpp"

#include <cmath>
#include <vector>

namespace fairsamp {

/// Square complex matrix, row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }
    complex_t &operator()(std::size_t r, std::size_t c) {
        return data_[r * dim_ + c];
    }
    [[nodiscard]] const complex_t &operator()(std::size_t r,
                                              std::size_t c) const {
        return data_[r * dim_ + c];
    }

    [[nodiscard]] Matrix adjoint() const {
        Matrix m(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                m(c, r) = std::conj((*this)(r, c));
            }
        }
        return m;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        require(a.dim_ == b.dim_, "matrix dimension mismatch");
        Matrix m(a.dim_);
        for (std::size_t r = 0; r < a.dim_; ++r) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const complex_t v = a(r, k);
                if (v == complex_t{}) {
                    continue;
                }
                for (std::size_t c = 0; c < a.dim_; ++c) {
                    m(r, c) += v * b(k, c);
                }
            }
        }
        return m;
    }

    /// Largest entrywise modulus of a - b.
    [[nodiscard]] double max_abs_diff(const Matrix &other) const {
        require(dim_ == other.dim_, "matrix dimension mismatch");
        double d = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            d = std::max(d, std::abs(data_[i] - other.data_[i]));
        }
        return d;
    }

  private:
    std::size_t dim_ = 0;
    std::vector<complex_t> data_;
};

/// Local matrix of `g` on its own operands; operand k is bit k of the index.
inline Matrix gate_matrix(const Gate &g) {
    const std::size_t k = g.qubits.size();
    Matrix m(std::size_t{1} << k);
    const double r = 1.0 / std::sqrt(2.0);
    const complex_t i1{0.0, 1.0};
    auto phase_of = [](double t) { return std::polar(1.0, pi * t); };
    switch (g.kind) {
    case GateKind::H:
        m(0, 0) = m(0, 1) = m(1, 0) = r;
        m(1, 1) = -r;
        break;
    case GateKind::X:
        m(0, 1) = m(1, 0) = 1.0;
        break;
    case GateKind::SqrtX:
        m(0, 0) = m(1, 1) = (1.0 + i1) / 2.0;
        m(0, 1) = m(1, 0) = (1.0 - i1) / 2.0;
        break;
    case GateKind::S:
        m(0, 0) = 1.0;
        m(1, 1) = i1;
        break;
    case GateKind::Sdg:
        m(0, 0) = 1.0;
        m(1, 1) = -i1;
        break;
    case GateKind::T:
        m(0, 0) = 1.0;
        m(1, 1) = phase_of(0.25);
        break;
    case GateKind::Tdg:
        m(0, 0) = 1.0;
        m(1, 1) = phase_of(-0.25);
        break;
    case GateKind::Rz:
        m(0, 0) = std::polar(1.0, -g.param / 2.0);
        m(1, 1) = std::polar(1.0, g.param / 2.0);
        break;
    case GateKind::Phase:
        m(0, 0) = 1.0;
        m(1, 1) = phase_of(g.param);
        break;
    case GateKind::CNOT:
        // local index bit 0 = control, bit 1 = target
        m(0, 0) = m(2, 2) = 1.0;
        m(1, 3) = m(3, 1) = 1.0;
        break;
    case GateKind::ControlledPhase:
    case GateKind::MultiControlledPhase: {
        const std::size_t all = m.dim() - 1;
        for (std::size_t x = 0; x < all; ++x) {
            m(x, x) = 1.0;
        }
        m(all, all) = phase_of(g.param);
        break;
    }
    case GateKind::Toffoli:
        for (std::size_t x = 0; x < 8; ++x) {
            const std::size_t y = (x & 3U) == 3U ? x ^ 4U : x;
            m(y, x) = 1.0;
        }
        break;
    case GateKind::Swap:
        m(0, 0) = m(3, 3) = 1.0;
        m(1, 2) = m(2, 1) = 1.0;
        break;
    case GateKind::Measure:
        throw Error("measurement has no unitary");
    }
    return m;
}

/// Apply `local` acting on `qubits` to a full 2^n vector in place.
inline void apply_local_matrix(std::vector<complex_t> &v, const Matrix &local,
                               const std::vector<std::size_t> &qubits) {
    const std::size_t k = qubits.size();
    const std::size_t ldim = std::size_t{1} << k;
    Basis mask = 0;
    for (auto q : qubits) {
        mask |= Basis{1} << q;
    }
    std::vector<std::size_t> index(ldim);
    std::vector<complex_t> in(ldim);
    for (Basis base = 0; base < v.size(); ++base) {
        if ((base & mask) != 0) {
            continue;
        }
        for (std::size_t l = 0; l < ldim; ++l) {
            Basis x = base;
            for (std::size_t b = 0; b < k; ++b) {
                if ((l >> b) & 1U) {
                    x |= Basis{1} << qubits[b];
                }
            }
            index[l] = x;
            in[l] = v[x];
        }
        for (std::size_t r = 0; r < ldim; ++r) {
            complex_t acc{};
            for (std::size_t c = 0; c < ldim; ++c) {
                acc += local(r, c) * in[c];
            }
            v[index[r]] = acc;
        }
    }
}

inline constexpr std::size_t max_unitary_qubits = 10;

/// Gate product of `c` in application order; out_permutation is not applied.
inline Matrix unitary_of(const Circuit &c) {
    require(c.n() <= max_unitary_qubits,
            "unitary_of limited to " + std::to_string(max_unitary_qubits) +
                " qubits, got " + std::to_string(c.n()));
    require(!c.has_measure(), "unitary_of: circuit contains measurements");
    const std::size_t dim = std::size_t{1} << c.n();
    std::vector<Matrix> locals;
    locals.reserve(c.gates().size());
    for (const auto &g : c.gates()) {
        locals.push_back(gate_matrix(g));
    }
    Matrix u(dim);
    std::vector<complex_t> col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), complex_t{});
        col[j] = 1.0;
        for (std::size_t gi = 0; gi < locals.size(); ++gi) {
            apply_local_matrix(col, locals[gi], c.gates()[gi].qubits);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            u(i, j) = col[i];
        }
    }
    return u;
}

/// Max deviation of U U^dagger from the identity.
inline double unitarity_error(const Matrix &u) {
    return (u * u.adjoint()).max_abs_diff(Matrix::identity(u.dim()));
}

/**
 * Smallest entrywise distance between `a` and e^{i phi} `b` over a global
 * phase aligned on the largest entry of `b`.
 */
inline double distance_up_to_phase(const Matrix &a, const Matrix &b) {
    require(a.dim() == b.dim(), "matrix dimension mismatch");
    std::size_t best_r = 0;
    std::size_t best_c = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < b.dim(); ++r) {
        for (std::size_t c = 0; c < b.dim(); ++c) {
            if (std::abs(b(r, c)) > best) {
                best = std::abs(b(r, c));
                best_r = r;
                best_c = c;
            }
        }
    }
    complex_t phase = 1.0;
    if (best > 0.0 && std::abs(a(best_r, best_c)) > 0.0) {
        const complex_t ratio = a(best_r, best_c) / b(best_r, best_c);
        phase = ratio / std::abs(ratio);
    }
    double d = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            d = std::max(d, std::abs(a(r, c) - phase * b(r, c)));
        }
    }
    return d;
}

inline bool equal_up_to_phase(const Matrix &a, const Matrix &b,
                              double tolerance = 1e-8) {
    return distance_up_to_phase(a, b) <= tolerance;
}

} // namespace fairsamp
