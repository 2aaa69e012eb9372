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
 * Grover-mixer QAOA: circuit builders, the matrix-free statevector path and
 * the p = 1 angle grid search.
 */
#pragma once

#include "circuit.hpp"
#include "ising.hpp"
#include "statevector.hpp"

#include <cmath>
#include <vector>

namespace fairsamp {

struct QaoaParams {
    std::vector<double> betas;
    std::vector<double> gammas;

    [[nodiscard]] std::size_t p() const { return betas.size(); }

    void check() const {
        require(!betas.empty(), "QAOA needs at least one round");
        require(betas.size() == gammas.size(),
                "QAOA betas and gammas must have equal length");
    }

    static QaoaParams one_round(double beta, double gamma) {
        return {{beta}, {gamma}};
    }
};

/// U_S = H on every qubit.
inline Circuit build_state_prep(std::size_t n) {
    Circuit c(n);
    for (std::size_t q = 0; q < n; ++q) {
        c.append(gate::h(q));
    }
    return c;
}

/// e^{-i gamma H_C}: CNOT-Rz(-2 J gamma)-CNOT per coupling, Rz(-2 h gamma)
/// per field.
inline Circuit build_phase_separator(const IsingModel &model, double gamma) {
    Circuit c(model.n());
    for (const auto &t : model.quadratic()) {
        c.append(gate::cnot(t.i, t.j));
        c.append(gate::rz(t.j, -2.0 * t.J * gamma));
        c.append(gate::cnot(t.i, t.j));
    }
    for (const auto &f : model.linear()) {
        c.append(gate::rz(f.i, -2.0 * f.h * gamma));
    }
    return c;
}

/**
 * U_M(beta) = Id - (1 - e^{-i beta}) |F><F| as H^n X^n MCP(-beta/pi) X^n H^n.
 * The X layer moves the phase from |1..1> onto |0..0>, the preimage of |F>.
 */
inline Circuit build_grover_mixer(std::size_t n, double beta) {
    Circuit c(n);
    std::vector<std::size_t> all(n);
    for (std::size_t q = 0; q < n; ++q) {
        all[q] = q;
        c.append(gate::h(q));
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.append(gate::x(q));
    }
    c.append(gate::mcphase(all, -beta / pi));
    for (std::size_t q = 0; q < n; ++q) {
        c.append(gate::x(q));
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.append(gate::h(q));
    }
    return c;
}

/// Complete abstract circuit, ending with a measurement of every qubit.
inline Circuit assemble_qaoa(const IsingModel &model, const QaoaParams &params,
                             bool measure = true) {
    params.check();
    Circuit c = build_state_prep(model.n());
    for (std::size_t k = 0; k < params.p(); ++k) {
        c.append(build_phase_separator(model, params.gammas[k]));
        c.append(build_grover_mixer(model.n(), params.betas[k]));
    }
    if (measure) {
        for (std::size_t q = 0; q < model.n(); ++q) {
            c.append(gate::measure(q));
        }
    }
    return c;
}

/// Matrix-free GM-QAOA on a precomputed energy table.
inline Statevector fast_statevector(const std::vector<double> &energies,
                                    std::size_t n, const QaoaParams &params) {
    params.check();
    require(energies.size() == (std::size_t{1} << n),
            "energy table must have 2^n entries");
    Statevector s = Statevector::uniform(n);
    auto &a = s.amplitudes();
    const double inv_dim = 1.0 / static_cast<double>(a.size());
    for (std::size_t k = 0; k < params.p(); ++k) {
        complex_t sum{};
        for (std::size_t x = 0; x < a.size(); ++x) {
            a[x] *= std::polar(1.0, -params.gammas[k] * energies[x]);
            sum += a[x];
        }
        const complex_t shift =
            (1.0 - std::polar(1.0, -params.betas[k])) * sum * inv_dim;
        for (auto &v : a) {
            v -= shift;
        }
    }
    return s;
}

inline Statevector fast_statevector(const IsingModel &model,
                                    const QaoaParams &params) {
    return fast_statevector(model.energy_table(), model.n(), params);
}

/// Probability mass on the members of `ground`.
inline double state_gsp(const Statevector &state, const GroundSet &ground) {
    require(state.n() == ground.n, "ground set width mismatch");
    double p = 0.0;
    for (Basis x = 0; x < state.dim(); ++x) {
        if (ground.contains(x)) {
            p += std::norm(state[x]);
        }
    }
    return p;
}

struct GridSearchResult {
    QaoaParams params;
    double energy = 0.0;
    double gsp = 0.0;
};

/// Energy gap below which two grid points count as tied.
inline constexpr double grid_tie_tolerance = 1e-12;

/**
 * Exhaustive p = 1 scan of beta, gamma over [-pi, pi) at `resolution`.
 * Ties resolve to the lexicographically smallest (beta, gamma).
 */
inline GridSearchResult grid_search(const IsingModel &model,
                                    double resolution = pi / 60,
                                    std::size_t p = 1) {
    require(p == 1, "grid search supports p = 1 only");
    require(resolution > 0.0 && resolution <= 2 * pi,
            "grid resolution must lie in (0, 2 pi]");
    const auto points =
        static_cast<std::size_t>(std::llround(2 * pi / resolution));
    require(points >= 1, "grid resolution too coarse");
    const auto energies = model.energy_table();
    const auto ground = enumerate_ground_states(model);

    GridSearchResult best;
    bool have = false;
    for (std::size_t bi = 0; bi < points; ++bi) {
        const double beta = -pi + static_cast<double>(bi) * resolution;
        for (std::size_t gi = 0; gi < points; ++gi) {
            const double gamma = -pi + static_cast<double>(gi) * resolution;
            const auto params = QaoaParams::one_round(beta, gamma);
            const auto state = fast_statevector(energies, model.n(), params);
            double e = 0.0;
            for (Basis x = 0; x < state.dim(); ++x) {
                e += std::norm(state[x]) * energies[x];
            }
            if (!have || e < best.energy - grid_tie_tolerance) {
                best.params = params;
                best.energy = e;
                best.gsp = state_gsp(state, ground);
                have = true;
            }
        }
    }
    return best;
}

} // namespace fairsamp
