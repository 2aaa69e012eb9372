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
 * Closed-system annealing on logical qubits:
 *   H(s) = -A(s) sum_i X_i + B(s) H_C,  s = t / T,  hbar = 1,
 * integrated by a Strang split step evaluated at each step midpoint.
 */
#pragma once

#include "ising.hpp"
#include "metrics.hpp"
#include "statevector.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace fairsamp {

struct Schedule {
    std::function<double(double)> A;
    std::function<double(double)> B;

    /// A(s) = 1 - s, B(s) = s.
    static Schedule linear() {
        return {[](double s) { return 1.0 - s; }, [](double s) { return s; }};
    }
};

inline constexpr std::size_t max_anneal_qubits = 14;

/**
 * Evolve |+^n> for total time T in `steps` steps. Each step applies
 * e^{-i dt/2 B H_C} e^{i dt A sum X} e^{-i dt/2 B H_C} with A, B taken at
 * the midpoint of the step.
 */
inline Statevector evolve(const IsingModel &model, double total_time,
                          std::size_t steps,
                          const Schedule &schedule = Schedule::linear()) {
    const std::size_t n = model.n();
    require(n <= max_anneal_qubits, "annealing limited to " +
                                        std::to_string(max_anneal_qubits) +
                                        " qubits");
    require(steps >= 1, "annealing needs at least one step");
    require(total_time >= 0.0 && std::isfinite(total_time),
            "annealing time must be finite and nonnegative");
    const auto energies = model.energy_table();
    Statevector s = Statevector::uniform(n);
    auto &a = s.amplitudes();
    const double dt = total_time / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) /
                           static_cast<double>(steps);
        const double b = schedule.B(mid);
        const double phi = dt * schedule.A(mid);
        auto half_problem = [&] {
            for (std::size_t x = 0; x < a.size(); ++x) {
                a[x] *= std::polar(1.0, -0.5 * dt * b * energies[x]);
            }
        };
        half_problem();
        const complex_t c{std::cos(phi), 0.0};
        const complex_t is{0.0, std::sin(phi)};
        for (std::size_t q = 0; q < n; ++q) {
            const Basis bit = Basis{1} << q;
            for (Basis x = 0; x < a.size(); ++x) {
                if ((x & bit) == 0) {
                    const complex_t a0 = a[x];
                    const complex_t a1 = a[x | bit];
                    a[x] = c * a0 + is * a1;
                    a[x | bit] = is * a0 + c * a1;
                }
            }
        }
        half_problem();
    }
    return s;
}

struct AnnealPoint {
    double time = 0.0;
    std::size_t steps = 0;
    double gsp = 0.0;
    std::optional<FairnessResult> fairness; ///< empty with no ground shots
    double energy = 0.0;
    double norm_drift = 0.0;
    /// Present when the ground set is closed under complement.
    std::optional<FairnessResult> fairness_combined;
    std::optional<double> gsp_combined;
};

struct AnnealSweepConfig {
    std::size_t steps_per_unit_time = 100;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    FairnessConfig fairness{anneal_path_inner_loops};
    Schedule schedule = Schedule::linear();
};

inline std::size_t anneal_steps(double total_time, std::size_t per_unit) {
    const double s = std::ceil(total_time * static_cast<double>(per_unit));
    return std::max<std::size_t>(1, static_cast<std::size_t>(s));
}

namespace detail {
inline std::optional<FairnessResult>
fairness_if_defined(const std::vector<std::uint64_t> &counts,
                    const FairnessConfig &cfg, std::uint64_t seed) {
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    if (counts.size() < 2 || total == 0) {
        return std::nullopt;
    }
    return fairness_nstr(counts, cfg, seed);
}
} // namespace detail

/// One evolve + sample + metrics row per annealing time. Point i uses seed
/// derive_seed(cfg.seed, i).
inline std::vector<AnnealPoint> anneal_sweep(const IsingModel &model,
                                             const std::vector<double> &times,
                                             const AnnealSweepConfig &cfg) {
    require(!times.empty(), "anneal sweep needs at least one time");
    require(cfg.steps_per_unit_time >= 1, "steps per unit time must be >= 1");
    require(cfg.shots >= 1, "anneal sweep needs at least one shot");
    cfg.fairness.check();
    const auto ground = enumerate_ground_states(model);
    GroundSet combined = ground;
    combined.complement_mode = ComplementMode::Combined;
    const bool complements = ground.has_complements();

    std::vector<AnnealPoint> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const std::uint64_t point_seed = derive_seed(cfg.seed, i);
        AnnealPoint p;
        p.time = times[i];
        p.steps = anneal_steps(times[i], cfg.steps_per_unit_time);
        const auto state = evolve(model, times[i], p.steps, cfg.schedule);
        p.norm_drift = std::abs(state.norm() - 1.0);
        p.energy = expectation_energy(state, model);
        const auto counts = sample(state, cfg.shots, derive_seed(point_seed, 0));
        p.gsp = gsp(counts, ground);
        p.fairness = detail::fairness_if_defined(
            ground_counts(counts, ground), cfg.fairness,
            derive_seed(point_seed, 1));
        if (complements) {
            p.gsp_combined = gsp(counts, combined);
            p.fairness_combined = detail::fairness_if_defined(
                ground_counts(counts, combined), cfg.fairness,
                derive_seed(point_seed, 2));
        }
        rows.push_back(p);
    }
    return rows;
}

namespace detail {
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string format_fairness(const std::optional<FairnessResult> &f) {
    return f ? f->to_string() : "NA";
}
} // namespace detail

/// Header `time,gsp,fairness_shots,energy`, extended by
/// `gsp_combined,fairness_shots_combined` when any row carries them.
inline void write_anneal_csv(std::ostream &os,
                             const std::vector<AnnealPoint> &rows) {
    const bool combined = std::any_of(rows.begin(), rows.end(), [](auto &r) {
        return r.gsp_combined.has_value();
    });
    os << "time,gsp,fairness_shots,energy";
    if (combined) {
        os << ",gsp_combined,fairness_shots_combined";
    }
    os << "\n";
    for (const auto &r : rows) {
        os << detail::format_real(r.time) << "," << detail::format_real(r.gsp)
           << "," << detail::format_fairness(r.fairness) << ","
           << detail::format_real(r.energy);
        if (combined) {
            os << ","
               << (r.gsp_combined ? detail::format_real(*r.gsp_combined)
                                  : "NA")
               << "," << detail::format_fairness(r.fairness_combined);
        }
        os << "\n";
    }
}

} // namespace fairsamp
