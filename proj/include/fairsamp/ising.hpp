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
 * Ising Hamiltonians H = -sum J_ij Z_i Z_j - sum h_i Z_i, brute-force ground
 * state enumeration and single-spin fixing.
 *
 * Z has eigenvalue +1 on spin up (bit 0) and -1 on spin down (bit 1).
 * Couplings are stored exactly as given; the leading minus sign is applied
 * when evaluating energies.
 */
#pragma once

#include "common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace fairsamp {

struct Coupling {
    std::size_t i;
    std::size_t j;
    double J;
    bool operator==(const Coupling &) const = default;
};

struct Field {
    std::size_t i;
    double h;
    bool operator==(const Field &) const = default;
};

enum class Spin { Up, Down };

inline constexpr int z_value(Spin s) { return s == Spin::Up ? 1 : -1; }

class IsingModel {
  public:
    IsingModel(std::size_t n, std::vector<Coupling> quadratic,
               std::vector<Field> linear = {})
        : n_(n), quadratic_(std::move(quadratic)), linear_(std::move(linear)) {
        require(n_ >= 1, "Ising model needs at least one qubit");
        require(n_ <= 63, "Ising model limited to 63 qubits");
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto &c : quadratic_) {
            require(c.i < c.j, "quadratic term (" + std::to_string(c.i) + "," +
                                   std::to_string(c.j) + ") must have i < j");
            require(c.j < n_, "quadratic term index out of range");
            require(seen.emplace(c.i, c.j).second,
                    "duplicate quadratic term (" + std::to_string(c.i) + "," +
                        std::to_string(c.j) + ")");
        }
        std::set<std::size_t> seen_linear;
        for (const auto &f : linear_) {
            require(f.i < n_, "linear term index out of range");
            require(seen_linear.insert(f.i).second,
                    "duplicate linear term on qubit " + std::to_string(f.i));
        }
    }

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const std::vector<Coupling> &quadratic() const {
        return quadratic_;
    }
    [[nodiscard]] const std::vector<Field> &linear() const { return linear_; }

    [[nodiscard]] double energy(Basis x) const {
        double e = 0.0;
        for (const auto &c : quadratic_) {
            const bool anti = bit_of(x, c.i) != bit_of(x, c.j);
            e -= anti ? -c.J : c.J;
        }
        for (const auto &f : linear_) {
            e -= bit_of(x, f.i) ? -f.h : f.h;
        }
        return e;
    }

    [[nodiscard]] double energy(std::string_view bitstring) const {
        return energy(parse_bitstring(bitstring, n_));
    }

    /// Energies of all 2^n basis states, indexed by basis value.
    [[nodiscard]] std::vector<double> energy_table() const {
        require(n_ <= 24, "energy table limited to 24 qubits");
        std::vector<double> table(std::size_t{1} << n_);
        for (Basis x = 0; x < table.size(); ++x) {
            table[x] = energy(x);
        }
        return table;
    }

    /// Return the model with every coefficient multiplied by `c`.
    [[nodiscard]] IsingModel scaled(double c) const {
        auto q = quadratic_;
        auto l = linear_;
        for (auto &t : q) {
            t.J *= c;
        }
        for (auto &t : l) {
            t.h *= c;
        }
        return {n_, std::move(q), std::move(l)};
    }

    bool operator==(const IsingModel &) const = default;

  private:
    std::size_t n_;
    std::vector<Coupling> quadratic_;
    std::vector<Field> linear_;
};

enum class ComplementMode { Separate, Combined };

struct GroundSet {
    std::size_t n = 0;
    std::vector<Basis> states; ///< ascending basis value
    double energy = 0.0;
    ComplementMode complement_mode = ComplementMode::Separate;

    [[nodiscard]] bool contains(Basis x) const {
        if (std::binary_search(states.begin(), states.end(), x)) {
            return true;
        }
        return complement_mode == ComplementMode::Combined &&
               std::binary_search(states.begin(), states.end(),
                                  fairsamp::complement(x, n));
    }

    /// True when the set is closed under flipping every spin.
    [[nodiscard]] bool has_complements() const {
        return std::all_of(states.begin(), states.end(), [&](Basis x) {
            return std::binary_search(states.begin(), states.end(),
                                      fairsamp::complement(x, n));
        });
    }
};

/// Degeneracy tolerance used when comparing energies to the minimum.
inline constexpr double ground_energy_tolerance = 1e-9;

inline GroundSet
enumerate_ground_states(const IsingModel &model,
                        ComplementMode mode = ComplementMode::Separate) {
    require(model.n() <= 24, "exhaustive ground state search limited to 24 "
                             "qubits, got " +
                                 std::to_string(model.n()));
    const auto table = model.energy_table();
    const double emin = *std::min_element(table.begin(), table.end());
    GroundSet g;
    g.n = model.n();
    g.complement_mode = mode;
    g.energy = emin;
    for (Basis x = 0; x < table.size(); ++x) {
        if (table[x] - emin <= ground_energy_tolerance) {
            g.states.push_back(x);
        }
    }
    require(mode == ComplementMode::Separate || g.has_complements(),
            "combined complement mode needs a ground set closed under "
            "complement");
    return g;
}

struct FixedSpinModel {
    IsingModel model;
    /// Constant dropped from the Hamiltonian: H(original) = H(model) + offset.
    double offset = 0.0;
};

/// Substitute Z_qubit = +-1 and relabel the remaining qubits downward.
inline FixedSpinModel fix_spin(const IsingModel &model, std::size_t qubit,
                               Spin value) {
    require(qubit < model.n(), "fix_spin: qubit " + std::to_string(qubit) +
                                   " out of range");
    require(model.n() >= 2, "fix_spin needs at least two qubits");
    const int z = z_value(value);
    auto relabel = [qubit](std::size_t i) { return i > qubit ? i - 1 : i; };

    std::vector<double> h(model.n() - 1, 0.0);
    std::vector<bool> has_h(model.n() - 1, false);
    double offset = 0.0;
    std::vector<Coupling> quadratic;
    for (const auto &c : model.quadratic()) {
        if (c.i == qubit || c.j == qubit) {
            const std::size_t other = relabel(c.i == qubit ? c.j : c.i);
            h[other] += c.J * z;
            has_h[other] = true;
        } else {
            quadratic.push_back({relabel(c.i), relabel(c.j), c.J});
        }
    }
    for (const auto &f : model.linear()) {
        if (f.i == qubit) {
            offset -= f.h * z;
        } else {
            h[relabel(f.i)] += f.h;
            has_h[relabel(f.i)] = true;
        }
    }
    std::vector<Field> linear;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (has_h[i] && h[i] != 0.0) {
            linear.push_back({i, h[i]});
        }
    }
    return {IsingModel(model.n() - 1, std::move(quadratic), std::move(linear)),
            offset};
}

enum class ProblemId { A, B, C, D, E };

inline constexpr ProblemId all_problems[] = {ProblemId::A, ProblemId::B,
                                             ProblemId::C, ProblemId::D,
                                             ProblemId::E};

inline char problem_letter(ProblemId id) {
    return static_cast<char>('a' + static_cast<int>(id));
}

inline ProblemId parse_problem_id(std::string_view s) {
    require(s.size() == 1, "problem id must be one of a-e, got '" +
                               std::string(s) + "'");
    const char c = static_cast<char>(std::tolower(s[0]));
    require(c >= 'a' && c <= 'e',
            "problem id must be one of a-e, got '" + std::string(s) + "'");
    return static_cast<ProblemId>(c - 'a');
}

/**
 * The five benchmark models with degenerate ground states, unreduced and
 * without linear terms.
 *
 * Problem B is printed with an unbalanced bracket; the bracket is closed
 * after the Z_1 group, which yields the twelve listed ground states at
 * energy -5.
 */
inline IsingModel builtin_problem(ProblemId id) {
    switch (id) {
    case ProblemId::A:
        return {5,
                {{0, 1, 1},
                 {0, 2, 1},
                 {0, 3, -1},
                 {1, 2, 1},
                 {1, 4, -1},
                 {2, 3, 1},
                 {2, 4, 1},
                 {3, 4, 1}}};
    case ProblemId::B:
        return {5,
                {{0, 1, 2},
                 {0, 2, 1},
                 {0, 3, 2},
                 {0, 4, 1},
                 {1, 2, -2},
                 {1, 3, -1},
                 {1, 4, 1},
                 {2, 3, 1},
                 {2, 4, 2},
                 {3, 4, -2}}};
    case ProblemId::C:
        return {6,
                {{0, 2, 1},
                 {1, 3, 1},
                 {2, 3, -1},
                 {2, 4, 1},
                 {2, 5, -1},
                 {3, 4, 1},
                 {3, 5, -1},
                 {4, 5, 1}}};
    case ProblemId::D:
        return {4, {{0, 1, 1}, {1, 2, -1}, {1, 3, -1}, {2, 3, -1}}};
    case ProblemId::E:
        return {3, {{0, 1, -1}, {0, 2, -1}, {1, 2, -1}}};
    }
    throw Error("unknown problem id");
}

/// Builtin problem with q0 fixed to spin up, as used by the gate-model path.
inline IsingModel reduced_problem(ProblemId id) {
    return fix_spin(builtin_problem(id), 0, Spin::Up).model;
}

// JSON: {"n": int, "quadratic": [[i,j,J],...], "linear": [[i,h],...]}

inline nlohmann::json to_json(const IsingModel &m) {
    nlohmann::json j;
    j["n"] = m.n();
    j["quadratic"] = nlohmann::json::array();
    for (const auto &c : m.quadratic()) {
        j["quadratic"].push_back({c.i, c.j, c.J});
    }
    j["linear"] = nlohmann::json::array();
    for (const auto &f : m.linear()) {
        j["linear"].push_back({f.i, f.h});
    }
    return j;
}

inline IsingModel ising_from_json(const nlohmann::json &j) {
    try {
        require(j.is_object(), "Ising JSON must be an object");
        const auto n = j.at("n").get<std::size_t>();
        std::vector<Coupling> quadratic;
        if (j.contains("quadratic")) {
            for (const auto &t : j.at("quadratic")) {
                require(t.is_array() && t.size() == 3,
                        "quadratic entries must be [i, j, J]");
                quadratic.push_back({t[0].get<std::size_t>(),
                                     t[1].get<std::size_t>(),
                                     t[2].get<double>()});
            }
        }
        std::vector<Field> linear;
        if (j.contains("linear")) {
            for (const auto &t : j.at("linear")) {
                require(t.is_array() && t.size() == 2,
                        "linear entries must be [i, h]");
                linear.push_back({t[0].get<std::size_t>(), t[1].get<double>()});
            }
        }
        return {n, std::move(quadratic), std::move(linear)};
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed Ising JSON: ") + e.what());
    }
}

inline IsingModel load_ising_json(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open Ising file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("cannot parse '" + path + "': " + e.what());
    }
    return ising_from_json(j);
}

} // namespace fairsamp
