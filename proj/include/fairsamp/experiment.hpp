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
 * The repeated-call experiment protocol: build, optionally compile,
 * simulate, then sample a number of calls and score each one.
 */
#pragma once

#include "anneal.hpp"
#include "compiler.hpp"
#include "gmqaoa.hpp"
#include "metrics.hpp"

#include <json.hpp>

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fairsamp {

/// Builtin topologies each problem is compiled to.
inline std::vector<std::string> admitted_topologies(ProblemId id) {
    if (id == ProblemId::D || id == ProblemId::E) {
        return {"LNN", "Clique"};
    }
    return {"5T", "5P", "6A", "7H", "Clique"};
}

/// Ancillas granted to a bare "Clique" when no budget is given.
inline constexpr std::size_t default_clique_ancillas = 1;

/**
 * A topology name or a path to a topology JSON file. A bare "Clique" gets
 * `logical` plus the ancilla budget (default one) nodes.
 */
inline Topology resolve_topology(const std::string &name_or_path,
                                 std::size_t logical,
                                 std::optional<std::size_t> ancillas) {
    if (std::filesystem::is_regular_file(name_or_path)) {
        return load_topology_json(name_or_path);
    }
    return builtin_topology(name_or_path,
                            logical + ancillas.value_or(default_clique_ancillas));
}

inline bool is_admitted(ProblemId id, const Topology &topology) {
    for (const auto &name : admitted_topologies(id)) {
        if (topology.name() == name ||
            (name == "Clique" && topology.name().rfind("Clique", 0) == 0)) {
            return true;
        }
    }
    return false;
}

/// Logical outcome distribution of a compiled circuit's physical state.
inline std::vector<double> logical_probabilities(const Statevector &physical,
                                                 const Layout &layout_out) {
    const std::size_t n = layout_out.size();
    std::vector<double> p(std::size_t{1} << n, 0.0);
    for (Basis y = 0; y < physical.dim(); ++y) {
        const double w = std::norm(physical[y]);
        if (w == 0.0) {
            continue;
        }
        Basis x = 0;
        for (std::size_t q = 0; q < n; ++q) {
            if (bit_of(y, layout_out[q])) {
                x |= Basis{1} << q;
            }
        }
        p[x] += w;
    }
    return p;
}

struct ExperimentSpec {
    ProblemId problem = ProblemId::A;
    bool reduce = true;
    std::optional<std::string> topology;
    Gateset gateset = Gateset::IbmNative;
    std::optional<std::size_t> ancillas;
    /// Explicit angles; a p = 1 grid search runs when absent.
    std::optional<QaoaParams> angles;
    std::uint64_t shots = 8192;
    std::size_t repeats = 20;
    std::uint64_t seed = 0;
    std::size_t inner_loops = gate_path_inner_loops;
    std::optional<std::string> calibration;

    void check() const {
        require(shots >= 1, "shots must be >= 1");
        require(repeats >= 1, "repeats must be >= 1");
        require(inner_loops >= 1, "inner loops must be >= 1");
        if (angles) {
            angles->check();
        }
    }
};

struct ExperimentResult {
    nlohmann::json summary;
    std::string calls_csv;
    std::string circuit_text;
};

/// The model an experiment runs on: a builtin problem, optionally with q0
/// fixed to spin up.
inline IsingModel experiment_model(ProblemId id, bool reduce) {
    return reduce ? reduced_problem(id) : builtin_problem(id);
}

inline nlohmann::json ground_set_json(const GroundSet &g) {
    nlohmann::json states = nlohmann::json::array();
    for (auto x : g.states) {
        states.push_back(to_bitstring(x, g.n));
    }
    return states;
}

/**
 * Run body(i) for i in [0, count) on up to `threads` threads (0 means
 * hardware_concurrency). The first exception thrown by any call is rethrown
 * after all finish.
 */
template <class F>
void parallel_for(std::size_t count, F &&body, std::size_t threads = 0) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    const std::size_t workers = std::min(count, threads);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

inline ExperimentResult run_experiment(const ExperimentSpec &spec) {
    spec.check();
    const IsingModel model = experiment_model(spec.problem, spec.reduce);
    const std::size_t n = model.n();
    const GroundSet ground = enumerate_ground_states(model);
    GroundSet combined = ground;
    combined.complement_mode = ComplementMode::Combined;
    const bool complements = ground.has_complements();

    nlohmann::json summary;
    summary["problem"] = std::string(1, problem_letter(spec.problem));
    summary["reduced"] = spec.reduce;
    summary["n"] = n;
    summary["model"] = to_json(model);
    summary["ground_energy"] = ground.energy;
    summary["ground_states"] = ground_set_json(ground);

    QaoaParams params;
    if (spec.angles) {
        params = *spec.angles;
        summary["angles"]["source"] = "explicit";
    } else {
        params = grid_search(model).params;
        summary["angles"]["source"] = "gridsearch";
    }
    summary["angles"]["betas"] = params.betas;
    summary["angles"]["gammas"] = params.gammas;

    const Statevector ideal = fast_statevector(model, params);
    summary["theory"]["energy"] = expectation_energy(ideal, model);
    summary["theory"]["gsp"] = state_gsp(ideal, ground);

    const Circuit abstract = assemble_qaoa(model, params);
    std::vector<double> probs;
    std::string circuit_text;
    if (spec.topology) {
        const Topology topo = resolve_topology(*spec.topology, n, spec.ancillas);
        if (spec.reduce && !std::filesystem::is_regular_file(*spec.topology)) {
            require(is_admitted(spec.problem, topo),
                    "topology " + topo.name() + " is not used for problem " +
                        std::string(1, problem_letter(spec.problem)));
        }
        const std::size_t budget =
            spec.ancillas.value_or(default_ancilla_budget(n, topo));
        const auto compiled =
            route_and_lower(abstract, topo, spec.gateset, budget, spec.seed);
        nlohmann::json cj;
        cj["topology"] = topo.name();
        cj["gateset"] = gateset_name(spec.gateset);
        cj["qubits"] = topo.size();
        cj["gates"] = compiled.circuit.size();
        cj["cnots"] = compiled.circuit.count(GateKind::CNOT);
        cj["swaps"] = compiled.swap_count;
        cj["layout_in"] = compiled.layout_in;
        cj["layout_out"] = compiled.layout_out;
        cj["ancilla"] = compiled.ancilla;
        if (topo.size() <= max_unitary_qubits) {
            cj["equivalent"] = verify_equivalence(abstract, compiled);
        }
        if (spec.calibration) {
            const auto calib = load_calibration_json(*spec.calibration);
            cj["aggregate_error"] = aggregate_error(compiled.circuit, calib);
        }
        summary["compile"] = cj;
        probs = logical_probabilities(simulate(compiled.circuit),
                                      compiled.layout_out);
        circuit_text = to_text(compiled.circuit);
    } else {
        require(!spec.calibration,
                "aggregate error needs a compiled circuit (give a topology)");
        probs = simulate(abstract).probabilities();
        circuit_text = to_text(abstract);
    }

    FairnessConfig fcfg;
    fcfg.inner_loops = spec.inner_loops;
    struct Call {
        std::uint64_t seed = 0;
        std::uint64_t hits = 0;
        double gsp = 0.0;
        std::optional<FairnessResult> fair;
        std::optional<FairnessResult> fair_combined;
    };
    std::vector<Call> calls(spec.repeats);
    parallel_for(spec.repeats, [&](std::size_t r) {
        Call &call = calls[r];
        call.seed = derive_seed(spec.seed, r);
        const auto counts = sample_probabilities(probs, n, spec.shots,
                                                 derive_seed(call.seed, 0));
        const auto gc = ground_counts(counts, ground);
        for (auto c : gc) {
            call.hits += c;
        }
        call.gsp = gsp(counts, ground);
        call.fair =
            detail::fairness_if_defined(gc, fcfg, derive_seed(call.seed, 1));
        if (complements) {
            call.fair_combined = detail::fairness_if_defined(
                ground_counts(counts, combined), fcfg,
                derive_seed(call.seed, 2));
        }
    });

    std::ostringstream csv;
    csv << "call,seed,shots,ground_shots,gsp,fairness_shots";
    if (complements) {
        csv << ",fairness_shots_combined";
    }
    csv << "\n";
    std::vector<double> gsps;
    nlohmann::json fairness_values = nlohmann::json::array();
    for (std::size_t r = 0; r < calls.size(); ++r) {
        const Call &call = calls[r];
        gsps.push_back(call.gsp);
        fairness_values.push_back(detail::format_fairness(call.fair));
        csv << r << "," << call.seed << "," << spec.shots << "," << call.hits
            << "," << detail::format_real(call.gsp) << ","
            << detail::format_fairness(call.fair);
        if (complements) {
            csv << "," << detail::format_fairness(call.fair_combined);
        }
        csv << "\n";
    }
    double mean = 0.0;
    for (double g : gsps) {
        mean += g;
    }
    mean /= static_cast<double>(gsps.size());
    summary["calls"]["repeats"] = spec.repeats;
    summary["calls"]["shots"] = spec.shots;
    summary["calls"]["seed"] = spec.seed;
    summary["calls"]["inner_loops"] = spec.inner_loops;
    summary["calls"]["gsp"] = gsps;
    summary["calls"]["gsp_mean"] = mean;
    summary["calls"]["gsp_min"] = *std::min_element(gsps.begin(), gsps.end());
    summary["calls"]["gsp_max"] = *std::max_element(gsps.begin(), gsps.end());
    summary["calls"]["fairness_shots"] = fairness_values;
    return {summary, csv.str(), circuit_text};
}

/// Write `contents` to `path` through a temporary file and a rename.
inline void write_file_atomically(const std::filesystem::path &path,
                                  const std::string &contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "cannot write '" + tmp.string() + "'");
        out << contents;
        require(out.good(), "failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

/// `<dir>/summary.json`, `<dir>/calls.csv`, `<dir>/circuit.txt`.
inline void write_results(const ExperimentResult &r,
                          const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_file_atomically(dir / "summary.json", r.summary.dump(2) + "\n");
    write_file_atomically(dir / "calls.csv", r.calls_csv);
    write_file_atomically(dir / "circuit.txt", r.circuit_text);
}

} // namespace fairsamp
