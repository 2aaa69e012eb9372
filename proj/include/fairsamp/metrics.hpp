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
 * Evaluation metrics: ground state probability, the number of shots needed
 * to reject fair sampling, and aggregate circuit error from calibration
 * data.
 */
#pragma once

#include "circuit.hpp"
#include "ising.hpp"
#include "statevector.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <tuple>
#include <vector>

namespace fairsamp {

/// Fraction of shots that landed in the ground set.
inline double gsp(const SampleCounts &counts, const GroundSet &ground) {
    require(counts.shots >= 1, "gsp needs at least one shot");
    std::uint64_t hit = 0;
    for (const auto &[x, k] : counts.counts) {
        if (ground.contains(x)) {
            hit += k;
        }
    }
    return static_cast<double>(hit) / static_cast<double>(counts.shots);
}

/**
 * Shot count per ground-state class, zeros included. In Separate mode each
 * state is its own class, in ascending order. In Combined mode a state and
 * its complement form one class, ordered by the smaller member.
 */
inline std::vector<std::uint64_t> ground_counts(const SampleCounts &counts,
                                                const GroundSet &ground) {
    std::vector<Basis> reps;
    for (auto x : ground.states) {
        const Basis r = ground.complement_mode == ComplementMode::Combined
                            ? std::min(x, complement(x, ground.n))
                            : x;
        reps.push_back(r);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    std::vector<std::uint64_t> out(reps.size(), 0);
    for (const auto &[x, k] : counts.counts) {
        if (!ground.contains(x)) {
            continue;
        }
        Basis r = x;
        if (ground.complement_mode == ComplementMode::Combined) {
            r = std::min(x, complement(x, ground.n));
        }
        auto it = std::lower_bound(reps.begin(), reps.end(), r);
        if (it != reps.end() && *it == r) {
            out[static_cast<std::size_t>(it - reps.begin())] += k;
        }
    }
    return out;
}

/// Upper-tail probability of a chi-squared statistic with `df` degrees of
/// freedom, via the regularized upper incomplete gamma function.
inline double chi2_pvalue(double statistic, std::size_t df) {
    require(df >= 1, "chi-squared needs df >= 1");
    if (statistic <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

/// Statistic above which the p-value drops below `significance`.
inline double chi2_critical(std::size_t df, double significance) {
    require(df >= 1, "chi-squared needs df >= 1");
    require(significance > 0.0 && significance < 1.0,
            "significance must lie in (0, 1)");
    return 2.0 * boost::math::gamma_q_inv(static_cast<double>(df) / 2.0,
                                          significance);
}

/// Pearson chi-squared statistic of `counts` against the uniform law.
inline double chi2_uniform(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    const double expected =
        static_cast<double>(total) / static_cast<double>(counts.size());
    double s = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        s += d * d / expected;
    }
    return s;
}

struct FairnessConfig {
    std::size_t inner_loops = 100000;
    double significance = 0.05;
    double rejection_fraction = 0.95;
    std::uint64_t cap = 10'000'000;

    void check() const {
        require(inner_loops >= 1, "fairness needs at least one inner loop");
        require(significance > 0.0 && significance < 1.0,
                "significance must lie in (0, 1)");
        require(rejection_fraction > 0.0 && rejection_fraction <= 1.0,
                "rejection fraction must lie in (0, 1]");
        require(cap >= 1, "fairness cap must be positive");
    }
};

inline constexpr std::size_t gate_path_inner_loops = 100000;
inline constexpr std::size_t anneal_path_inner_loops = 1000;

struct FairnessResult {
    bool cap_reached = false;
    std::uint64_t shots = 0; ///< the cap when cap_reached

    bool operator==(const FairnessResult &) const = default;

    [[nodiscard]] std::string to_string() const {
        return cap_reached ? ">" + std::to_string(shots)
                           : std::to_string(shots);
    }
};

/// Fraction of `inner_loops` multinomial draws of size `shots` from `probs`
/// that reject uniformity. Trial t always uses seed derive_seed(seed, t).
inline double fairness_rejection_rate(const std::vector<double> &probs,
                                      std::uint64_t shots,
                                      const FairnessConfig &cfg,
                                      std::uint64_t seed) {
    const std::size_t k = probs.size();
    const double crit = chi2_critical(k - 1, cfg.significance);
    std::vector<std::uint64_t> draw(k);
    std::size_t rejected = 0;
    for (std::size_t t = 0; t < cfg.inner_loops; ++t) {
        Rng rng(derive_seed(seed, t));
        std::uint64_t remaining = shots;
        double mass = 1.0;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            std::uint64_t x = 0;
            if (remaining > 0 && probs[i] > 0.0) {
                const double q = std::clamp(probs[i] / mass, 0.0, 1.0);
                std::binomial_distribution<std::uint64_t> bin(remaining, q);
                x = bin(rng);
            }
            draw[i] = x;
            remaining -= x;
            mass -= probs[i];
        }
        draw[k - 1] = remaining;
        if (chi2_uniform(draw) > crit) {
            ++rejected;
        }
    }
    return static_cast<double>(rejected) / static_cast<double>(cfg.inner_loops);
}

/**
 * Smallest number of shots N at which at least `rejection_fraction` of
 * `inner_loops` simulated experiments, each drawing N shots from the
 * empirical ground-state distribution, reject the uniform hypothesis by a
 * chi-squared test at `significance`. Found by doubling then bisection.
 */
inline FairnessResult fairness_nstr(std::span<const std::uint64_t> counts,
                                    const FairnessConfig &cfg,
                                    std::uint64_t seed) {
    cfg.check();
    require(counts.size() >= 2,
            "fairness needs at least two ground states, got " +
                std::to_string(counts.size()));
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    require(total >= 1, "fairness needs at least one ground-state shot");
    std::vector<double> probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    auto qualifies = [&](std::uint64_t n) {
        return fairness_rejection_rate(probs, n, cfg, seed) >=
               cfg.rejection_fraction;
    };
    std::uint64_t lo = 0; // largest N known not to qualify
    std::uint64_t hi = 1;
    while (true) {
        if (hi >= cfg.cap) {
            hi = cfg.cap;
            if (!qualifies(hi)) {
                return {true, cfg.cap};
            }
            break;
        }
        if (qualifies(hi)) {
            break;
        }
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (qualifies(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {false, hi};
}

inline FairnessResult fairness_nstr(const std::vector<std::uint64_t> &counts,
                                    const FairnessConfig &cfg,
                                    std::uint64_t seed) {
    return fairness_nstr(std::span<const std::uint64_t>(counts), cfg, seed);
}

/// Gate names used as calibration keys: lower case, with cnot -> cx and
/// sqrtx -> sx.
inline std::string calibration_gate_key(std::string_view name) {
    std::string key;
    for (char c : name) {
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (key == "cnot") {
        return "cx";
    }
    if (key == "sqrtx") {
        return "sx";
    }
    return key;
}

inline std::string calibration_gate_key(GateKind k) {
    return calibration_gate_key(gate_name(k));
}

/**
 * Error rates per (gate, qubit), per (gate, edge) and per readout qubit,
 * with optional class-wide defaults used when no specific entry exists.
 */
class CalibrationData {
  public:
    struct Defaults {
        std::optional<double> single;
        std::optional<double> two;
        std::optional<double> readout;
    };

    void set_single(std::string_view gate, std::size_t qubit, double e) {
        check_rate(e);
        single_[{calibration_gate_key(gate), qubit}] = e;
    }
    void set_two(std::string_view gate, std::size_t a, std::size_t b,
                 double e) {
        check_rate(e);
        two_[{calibration_gate_key(gate), std::min(a, b), std::max(a, b)}] = e;
    }
    void set_readout(std::size_t qubit, double e) {
        check_rate(e);
        readout_[qubit] = e;
    }
    void set_defaults(Defaults d) {
        for (auto v : {d.single, d.two, d.readout}) {
            if (v) {
                check_rate(*v);
            }
        }
        defaults_ = d;
    }
    [[nodiscard]] const Defaults &defaults() const { return defaults_; }

    /// Error rate of one (non-measurement) gate.
    [[nodiscard]] double gate_error(const Gate &g) const {
        const auto key = calibration_gate_key(g.kind);
        if (g.qubits.size() == 1) {
            auto it = single_.find({key, g.qubits[0]});
            if (it != single_.end()) {
                return it->second;
            }
            if (defaults_.single) {
                return *defaults_.single;
            }
            throw Error("no calibration for " + key + " on qubit " +
                        std::to_string(g.qubits[0]));
        }
        if (g.qubits.size() == 2) {
            const auto a = std::min(g.qubits[0], g.qubits[1]);
            const auto b = std::max(g.qubits[0], g.qubits[1]);
            auto it = two_.find({key, a, b});
            if (it != two_.end()) {
                return it->second;
            }
            if (defaults_.two) {
                return *defaults_.two;
            }
            throw Error("no calibration for " + key + " on edge " +
                        std::to_string(a) + "-" + std::to_string(b));
        }
        throw Error("no calibration model for " + key + " on " +
                    std::to_string(g.qubits.size()) + " qubits");
    }

    [[nodiscard]] double readout_error(std::size_t qubit) const {
        auto it = readout_.find(qubit);
        if (it != readout_.end()) {
            return it->second;
        }
        if (defaults_.readout) {
            return *defaults_.readout;
        }
        throw Error("no readout calibration for qubit " +
                    std::to_string(qubit));
    }

  private:
    static void check_rate(double e) {
        require(e >= 0.0 && e <= 1.0,
                "error rate " + std::to_string(e) + " outside [0, 1]");
    }

    std::map<std::pair<std::string, std::size_t>, double> single_;
    std::map<std::tuple<std::string, std::size_t, std::size_t>, double> two_;
    std::map<std::size_t, double> readout_;
    Defaults defaults_;
};

inline CalibrationData calibration_from_json(const nlohmann::json &j) {
    try {
        require(j.is_object(), "calibration JSON must be an object");
        CalibrationData c;
        if (j.contains("single_qubit")) {
            for (const auto &e : j.at("single_qubit")) {
                c.set_single(e.at("gate").get<std::string>(),
                             e.at("qubit").get<std::size_t>(),
                             e.at("error").get<double>());
            }
        }
        if (j.contains("two_qubit")) {
            for (const auto &e : j.at("two_qubit")) {
                const auto q = e.at("qubits").get<std::vector<std::size_t>>();
                require(q.size() == 2, "two_qubit entries need two qubits");
                c.set_two(e.at("gate").get<std::string>(), q[0], q[1],
                          e.at("error").get<double>());
            }
        }
        if (j.contains("readout")) {
            for (const auto &e : j.at("readout")) {
                c.set_readout(e.at("qubit").get<std::size_t>(),
                              e.at("error").get<double>());
            }
        }
        if (j.contains("defaults")) {
            const auto &d = j.at("defaults");
            CalibrationData::Defaults def;
            if (d.contains("single")) {
                def.single = d.at("single").get<double>();
            }
            if (d.contains("two")) {
                def.two = d.at("two").get<double>();
            }
            if (d.contains("readout")) {
                def.readout = d.at("readout").get<double>();
            }
            c.set_defaults(def);
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed calibration JSON: ") + e.what());
    }
}

inline CalibrationData load_calibration_json(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open calibration file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("cannot parse '" + path + "': " + e.what());
    }
    return calibration_from_json(j);
}

/// E = 1 - prod (1 - e_i), accumulated as E <- E + e - E e so that small
/// rates do not lose digits to the final subtraction from one.
inline double aggregate_error(std::span<const double> rates) {
    double total = 0.0;
    for (double e : rates) {
        require(e >= 0.0 && e <= 1.0, "error rate outside [0, 1]");
        total = total + e - total * e;
    }
    return total;
}

/// Per-operation error rates of `c` in gate order, readout terms last.
inline std::vector<double> error_rates(const Circuit &c,
                                       const CalibrationData &calib,
                                       bool include_readout = true) {
    std::vector<double> rates;
    std::vector<std::size_t> measured;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::Measure) {
            measured.push_back(g.qubits[0]);
            continue;
        }
        rates.push_back(calib.gate_error(g));
    }
    if (include_readout) {
        for (auto q : measured) {
            rates.push_back(calib.readout_error(q));
        }
    }
    return rates;
}

inline double aggregate_error(const Circuit &c, const CalibrationData &calib,
                              bool include_readout = true) {
    return aggregate_error(error_rates(c, calib, include_readout));
}

} // namespace fairsamp
