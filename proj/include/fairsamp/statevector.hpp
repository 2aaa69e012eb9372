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
 * Dense statevector simulation, shot sampling and energy expectation.
 */
#pragma once

#include "circuit.hpp"
#include "ising.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <vector>

namespace fairsamp {

inline constexpr std::size_t max_statevector_qubits = 24;

class Statevector {
  public:
    /// |up^n>, i.e. basis state 0.
    explicit Statevector(std::size_t n) : n_(n) {
        require(n_ >= 1 && n_ <= max_statevector_qubits,
                "statevector supports 1.." +
                    std::to_string(max_statevector_qubits) + " qubits, got " +
                    std::to_string(n_));
        amps_.assign(std::size_t{1} << n_, complex_t{});
        amps_[0] = 1.0;
    }

    Statevector(std::size_t n, std::vector<complex_t> amplitudes)
        : n_(n), amps_(std::move(amplitudes)) {
        require(n_ >= 1 && n_ <= max_statevector_qubits,
                "statevector qubit count out of range");
        require(amps_.size() == (std::size_t{1} << n_),
                "amplitude vector must have 2^n entries");
    }

    static Statevector basis_state(std::size_t n, Basis x) {
        Statevector s(n);
        require(x < s.amps_.size(), "basis state out of range");
        s.amps_[0] = 0.0;
        s.amps_[x] = 1.0;
        return s;
    }

    static Statevector uniform(std::size_t n) {
        Statevector s(n);
        const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
        std::fill(s.amps_.begin(), s.amps_.end(), complex_t{a, 0.0});
        return s;
    }

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] const std::vector<complex_t> &amplitudes() const {
        return amps_;
    }
    std::vector<complex_t> &amplitudes() { return amps_; }
    [[nodiscard]] complex_t operator[](Basis x) const { return amps_[x]; }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

    void apply(const Gate &g) {
        check_gate(g, n_);
        const complex_t i1{0.0, 1.0};
        switch (g.kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            apply_1q(g.qubits[0], r, r, r, -r);
            break;
        }
        case GateKind::X:
            apply_1q(g.qubits[0], 0.0, 1.0, 1.0, 0.0);
            break;
        case GateKind::SqrtX:
            apply_1q(g.qubits[0], (1.0 + i1) / 2.0, (1.0 - i1) / 2.0,
                     (1.0 - i1) / 2.0, (1.0 + i1) / 2.0);
            break;
        case GateKind::S:
            apply_diag(g.qubits[0], 1.0, i1);
            break;
        case GateKind::Sdg:
            apply_diag(g.qubits[0], 1.0, -i1);
            break;
        case GateKind::T:
            apply_diag(g.qubits[0], 1.0, std::polar(1.0, pi / 4));
            break;
        case GateKind::Tdg:
            apply_diag(g.qubits[0], 1.0, std::polar(1.0, -pi / 4));
            break;
        case GateKind::Rz:
            apply_diag(g.qubits[0], std::polar(1.0, -g.param / 2),
                       std::polar(1.0, g.param / 2));
            break;
        case GateKind::Phase:
        case GateKind::ControlledPhase:
        case GateKind::MultiControlledPhase: {
            Basis mask = 0;
            for (auto q : g.qubits) {
                mask |= Basis{1} << q;
            }
            const complex_t ph = std::polar(1.0, pi * g.param);
            for (Basis x = 0; x < amps_.size(); ++x) {
                if ((x & mask) == mask) {
                    amps_[x] *= ph;
                }
            }
            break;
        }
        case GateKind::CNOT:
            apply_controlled_x(Basis{1} << g.qubits[0], g.qubits[1]);
            break;
        case GateKind::Toffoli:
            apply_controlled_x((Basis{1} << g.qubits[0]) |
                                   (Basis{1} << g.qubits[1]),
                               g.qubits[2]);
            break;
        case GateKind::Swap: {
            const Basis a = Basis{1} << g.qubits[0];
            const Basis b = Basis{1} << g.qubits[1];
            for (Basis x = 0; x < amps_.size(); ++x) {
                if ((x & a) != 0 && (x & b) == 0) {
                    std::swap(amps_[x], amps_[x ^ a ^ b]);
                }
            }
            break;
        }
        case GateKind::Measure:
            break;
        }
    }

  private:
    void apply_1q(std::size_t q, complex_t m00, complex_t m01, complex_t m10,
                  complex_t m11) {
        const Basis bit = Basis{1} << q;
        for (Basis x = 0; x < amps_.size(); ++x) {
            if ((x & bit) == 0) {
                const complex_t a0 = amps_[x];
                const complex_t a1 = amps_[x | bit];
                amps_[x] = m00 * a0 + m01 * a1;
                amps_[x | bit] = m10 * a0 + m11 * a1;
            }
        }
    }

    void apply_diag(std::size_t q, complex_t d0, complex_t d1) {
        const Basis bit = Basis{1} << q;
        for (Basis x = 0; x < amps_.size(); ++x) {
            amps_[x] *= (x & bit) ? d1 : d0;
        }
    }

    void apply_controlled_x(Basis controls, std::size_t target) {
        const Basis bit = Basis{1} << target;
        for (Basis x = 0; x < amps_.size(); ++x) {
            if ((x & controls) == controls && (x & bit) == 0) {
                std::swap(amps_[x], amps_[x | bit]);
            }
        }
    }

    std::size_t n_;
    std::vector<complex_t> amps_;
};

/// Run `c` from |up^n>; Measure gates are ignored.
inline Statevector simulate(const Circuit &c) {
    Statevector s(c.n());
    for (const auto &g : c.gates()) {
        s.apply(g);
    }
    return s;
}

/// Run `c` from an arbitrary initial state.
inline Statevector simulate(const Circuit &c, Statevector initial) {
    require(initial.n() == c.n(), "initial state width mismatch");
    for (const auto &g : c.gates()) {
        initial.apply(g);
    }
    return initial;
}

/// |<a|b>|, insensitive to global phase.
inline double overlap(const Statevector &a, const Statevector &b) {
    require(a.dim() == b.dim(), "statevector dimension mismatch");
    complex_t s{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return std::abs(s);
}

struct SampleCounts {
    std::size_t n = 0;
    std::uint64_t shots = 0;
    std::map<Basis, std::uint64_t> counts;

    [[nodiscard]] std::uint64_t count(Basis x) const {
        auto it = counts.find(x);
        return it == counts.end() ? 0 : it->second;
    }

    bool operator==(const SampleCounts &) const = default;
};

/// Multinomial draw of `shots` outcomes from a probability vector.
inline SampleCounts sample_probabilities(const std::vector<double> &probs,
                                         std::size_t n, std::uint64_t shots,
                                         std::uint64_t seed) {
    require(shots >= 1, "sample needs at least one shot");
    require(probs.size() == (std::size_t{1} << n),
            "probability vector must have 2^n entries");
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    require(acc > 0.0, "cannot sample from a zero vector");
    Rng rng(seed);
    SampleCounts out;
    out.n = n;
    out.shots = shots;
    std::vector<std::uint64_t> tally(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= probs.size()) {
            idx = probs.size() - 1;
        }
        ++tally[idx];
    }
    for (std::size_t i = 0; i < tally.size(); ++i) {
        if (tally[i] != 0) {
            out.counts.emplace(static_cast<Basis>(i), tally[i]);
        }
    }
    return out;
}

/// Multinomial shot sampling from |a|^2, reproducible for a given seed.
inline SampleCounts sample(const Statevector &state, std::uint64_t shots,
                           std::uint64_t seed) {
    return sample_probabilities(state.probabilities(), state.n(), shots, seed);
}

inline double expectation_energy(const Statevector &state,
                                 const IsingModel &model) {
    require(state.n() == model.n(),
            "state has " + std::to_string(state.n()) +
                " qubits but model has " + std::to_string(model.n()));
    double e = 0.0;
    for (Basis x = 0; x < state.dim(); ++x) {
        const double p = std::norm(state[x]);
        if (p != 0.0) {
            e += p * model.energy(x);
        }
    }
    return e;
}

// Counts output: JSON {"shots": N, "counts": {"<bits>": c, ...}} and CSV
// "bitstring,count" rows, both keyed by qubit-0-first bitstrings.

inline nlohmann::json to_json(const SampleCounts &c) {
    nlohmann::json j;
    j["shots"] = c.shots;
    j["counts"] = nlohmann::json::object();
    for (const auto &[x, k] : c.counts) {
        j["counts"][to_bitstring(x, c.n)] = k;
    }
    return j;
}

inline SampleCounts counts_from_json(const nlohmann::json &j) {
    try {
        SampleCounts c;
        c.shots = j.at("shots").get<std::uint64_t>();
        std::uint64_t total = 0;
        for (const auto &[key, value] : j.at("counts").items()) {
            if (c.n == 0) {
                c.n = key.size();
            }
            const auto k = value.get<std::uint64_t>();
            c.counts[parse_bitstring(key, c.n)] += k;
            total += k;
        }
        require(total == c.shots, "counts do not sum to shots");
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed counts JSON: ") + e.what());
    }
}

inline void write_counts_csv(std::ostream &os, const SampleCounts &c) {
    std::map<std::string, std::uint64_t> rows;
    for (const auto &[x, k] : c.counts) {
        rows[to_bitstring(x, c.n)] = k;
    }
    os << "bitstring,count\n";
    for (const auto &[s, k] : rows) {
        os << s << "," << k << "\n";
    }
}

} // namespace fairsamp
