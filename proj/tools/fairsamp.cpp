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
//
// fairsamp command line front end.

#include <fairsamp/fairsamp.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fairsamp;

struct ProblemArgs {
    std::string problem = "a";
    bool reduce = true;
    std::vector<double> betas;
    std::vector<double> gammas;
    bool gridsearch = false;
};

void add_problem_options(CLI::App *cmd, ProblemArgs &a, bool reduce_default,
                         bool with_angles) {
    a.reduce = reduce_default;
    cmd->add_option("--problem", a.problem, "Builtin problem a-e")
        ->capture_default_str();
    cmd->add_flag("--reduce,!--full", a.reduce,
                  "Fix q0 to spin up (--full keeps all qubits)")
        ->capture_default_str();
    if (with_angles) {
        cmd->add_option("--beta", a.betas, "Mixer angle(s) in radians")
            ->delimiter(',');
        cmd->add_option("--gamma", a.gammas,
                        "Phase separator angle(s) in radians")
            ->delimiter(',');
        cmd->add_flag("--gridsearch", a.gridsearch,
                      "Pick p = 1 angles by grid search");
    }
}

IsingModel model_of(const ProblemArgs &a) {
    return experiment_model(parse_problem_id(a.problem), a.reduce);
}

/// Explicit angles, or a grid search when --gridsearch is set or no angle
/// is given.
QaoaParams params_of(const ProblemArgs &a, const IsingModel &model) {
    if (!a.gridsearch && (!a.betas.empty() || !a.gammas.empty())) {
        QaoaParams p{a.betas, a.gammas};
        p.check();
        return p;
    }
    require(a.betas.empty() && a.gammas.empty(),
            "--gridsearch cannot be combined with explicit angles");
    return grid_search(model).params;
}

void emit(const std::optional<std::string> &path, const std::string &text) {
    if (path) {
        write_file_atomically(*path, text);
    } else {
        std::cout << text;
    }
}

Circuit read_circuit_file(const std::string &path) {
    std::ifstream in(path);
    require(in.good(), "cannot open circuit file '" + path + "'");
    return read_circuit(in);
}

int cmd_problems() {
    std::printf("%-3s %-3s %-10s %-14s %-14s %s\n", "id", "n", "couplings",
                "ground_energy", "ground_states", "reduced_ground_states");
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        const auto g = enumerate_ground_states(m);
        const auto r = enumerate_ground_states(reduced_problem(id));
        std::printf("%-3c %-3zu %-10zu %-14g %-14zu %zu\n", problem_letter(id),
                    m.n(), m.quadratic().size(), g.energy, g.states.size(),
                    r.states.size());
    }
    return 0;
}

int cmd_gridsearch(const ProblemArgs &a, int steps) {
    require(steps >= 1, "--steps must be >= 1");
    const auto model = model_of(a);
    const auto r = grid_search(model, pi / steps);
    std::printf("problem: %s\n", a.problem.c_str());
    std::printf("energy: %.3f\n", r.energy);
    std::printf("gsp: %.3f\n", r.gsp);
    std::printf("beta: %.10g (%.4f pi)\n", r.params.betas[0],
                r.params.betas[0] / pi);
    std::printf("gamma: %.10g (%.4f pi)\n", r.params.gammas[0],
                r.params.gammas[0] / pi);
    return 0;
}

int cmd_build(const ProblemArgs &a, const std::optional<std::string> &out) {
    const auto model = model_of(a);
    emit(out, to_text(assemble_qaoa(model, params_of(a, model))));
    return 0;
}

struct CompileArgs {
    std::optional<std::string> circuit;
    std::string topology = "Clique";
    std::string gateset = "ibm";
    std::optional<std::size_t> ancillas;
    bool verify = false;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

int cmd_compile(const ProblemArgs &a, const CompileArgs &c) {
    Circuit abstract(1);
    std::optional<ProblemId> id;
    if (c.circuit) {
        abstract = read_circuit_file(*c.circuit);
    } else {
        id = parse_problem_id(a.problem);
        const auto model = model_of(a);
        abstract = assemble_qaoa(model, params_of(a, model));
    }
    const auto topo = resolve_topology(c.topology, abstract.n(), c.ancillas);
    if (id && a.reduce && !std::filesystem::is_regular_file(c.topology)) {
        require(is_admitted(*id, topo), "topology " + topo.name() +
                                            " is not used for problem " +
                                            a.problem);
    }
    const auto gs = parse_gateset(c.gateset);
    const auto budget =
        c.ancillas.value_or(default_ancilla_budget(abstract.n(), topo));
    const auto compiled = route_and_lower(abstract, topo, gs, budget, c.seed);
    std::printf("topology: %s\n", topo.name().c_str());
    std::printf("gateset: %s\n", c.gateset.c_str());
    std::printf("gates: %zu\n", compiled.circuit.size());
    std::printf("cnots: %zu\n", compiled.circuit.count(GateKind::CNOT));
    std::printf("swaps: %zu\n", compiled.swap_count);
    std::printf("ancillas: %zu\n", compiled.ancilla.size());
    bool ok = true;
    if (c.verify) {
        ok = verify_equivalence(abstract, compiled);
        std::printf("equivalent: %s\n", ok ? "true" : "false");
    }
    if (!ok) {
        return 2;
    }
    if (c.out) {
        write_file_atomically(*c.out, to_text(compiled.circuit));
    }
    return 0;
}

struct SimulateArgs {
    std::optional<std::string> circuit;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::optional<std::string> out;
};

int cmd_simulate(const ProblemArgs &a, const SimulateArgs &s) {
    Circuit c(1);
    if (s.circuit) {
        c = read_circuit_file(*s.circuit);
    } else {
        const auto model = model_of(a);
        c = assemble_qaoa(model, params_of(a, model));
    }
    const auto counts = sample(simulate(c), s.shots, s.seed);
    std::ostringstream os;
    if (s.format == "json") {
        os << to_json(counts).dump(2) << "\n";
    } else if (s.format == "csv") {
        write_counts_csv(os, counts);
    } else {
        throw Error("unknown format '" + s.format + "' (json or csv)");
    }
    emit(s.out, os.str());
    return 0;
}

struct RunArgs {
    std::optional<std::string> topology;
    std::string gateset = "ibm";
    std::optional<std::size_t> ancillas;
    std::uint64_t shots = 8192;
    std::size_t repeats = 20;
    std::uint64_t seed = 0;
    std::size_t ni = gate_path_inner_loops;
    std::optional<std::string> calib;
    std::string out = "fairsamp-run";
};

int cmd_run(const ProblemArgs &a, const RunArgs &r) {
    ExperimentSpec spec;
    spec.problem = parse_problem_id(a.problem);
    spec.reduce = a.reduce;
    spec.topology = r.topology;
    spec.gateset = parse_gateset(r.gateset);
    spec.ancillas = r.ancillas;
    if (!a.gridsearch && (!a.betas.empty() || !a.gammas.empty())) {
        spec.angles = QaoaParams{a.betas, a.gammas};
    }
    spec.shots = r.shots;
    spec.repeats = r.repeats;
    spec.seed = r.seed;
    spec.inner_loops = r.ni;
    spec.calibration = r.calib;
    const auto result = run_experiment(spec);
    write_results(result, r.out);
    const auto &calls = result.summary["calls"];
    std::printf("theory_gsp: %.6f\n",
                result.summary["theory"]["gsp"].get<double>());
    std::printf("gsp_mean: %.6f\n", calls["gsp_mean"].get<double>());
    std::printf("gsp_min: %.6f\n", calls["gsp_min"].get<double>());
    std::printf("gsp_max: %.6f\n", calls["gsp_max"].get<double>());
    if (result.summary.contains("compile")) {
        const auto &cj = result.summary["compile"];
        std::printf("swaps: %zu\n", cj["swaps"].get<std::size_t>());
        if (cj.contains("aggregate_error")) {
            std::printf("aggregate_error: %.6f\n",
                        cj["aggregate_error"].get<double>());
        }
    }
    std::printf("output: %s\n", r.out.c_str());
    return 0;
}

struct MetricsArgs {
    std::optional<std::string> counts;
    std::optional<std::string> circuit;
    std::optional<std::string> calib;
    bool combined = false;
    bool no_readout = false;
    std::size_t ni = gate_path_inner_loops;
    std::uint64_t seed = 0;
};

int cmd_metrics(const ProblemArgs &a, const MetricsArgs &m) {
    require(m.counts || m.circuit,
            "metrics needs --counts and/or --circuit with --calib");
    if (m.counts) {
        std::ifstream in(*m.counts);
        require(in.good(), "cannot open counts file '" + *m.counts + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception &e) {
            throw Error("cannot parse '" + *m.counts + "': " + e.what());
        }
        const auto counts = counts_from_json(j);
        const auto model = model_of(a);
        require(counts.n == model.n(),
                "counts width does not match the problem");
        auto ground = enumerate_ground_states(
            model,
            m.combined ? ComplementMode::Combined : ComplementMode::Separate);
        require(!m.combined || ground.has_complements(),
                "--combined needs a ground set closed under complement "
                "(use --full)");
        FairnessConfig cfg;
        cfg.inner_loops = m.ni;
        const auto gc = ground_counts(counts, ground);
        std::printf("gsp: %.6f\n", gsp(counts, ground));
        std::printf("fairness_shots: %s\n",
                    detail::format_fairness(
                        detail::fairness_if_defined(gc, cfg, m.seed))
                        .c_str());
    }
    if (m.circuit) {
        require(m.calib.has_value(), "aggregate error needs --calib");
        const auto c = read_circuit_file(*m.circuit);
        const auto calib = load_calibration_json(*m.calib);
        std::printf("aggregate_error: %.10g\n",
                    aggregate_error(c, calib, !m.no_readout));
    }
    return 0;
}

struct AnnealArgs {
    std::vector<double> times{0, 1, 2, 5, 10, 20, 50, 100};
    std::size_t steps_per_time = 100;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    std::size_t ni = anneal_path_inner_loops;
    std::optional<std::string> out;
};

int cmd_anneal(const ProblemArgs &a, const AnnealArgs &r) {
    AnnealSweepConfig cfg;
    cfg.steps_per_unit_time = r.steps_per_time;
    cfg.shots = r.shots;
    cfg.seed = r.seed;
    cfg.fairness.inner_loops = r.ni;
    const auto rows = anneal_sweep(model_of(a), r.times, cfg);
    std::ostringstream os;
    write_anneal_csv(os, rows);
    emit(r.out, os.str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"fairsamp: fair-sampling GM-QAOA and annealing workbench"};
    app.require_subcommand(1);

    auto *problems = app.add_subcommand("problems", "List builtin problems");

    ProblemArgs grid_args;
    int grid_steps = 60;
    auto *grid = app.add_subcommand("gridsearch", "p = 1 angle grid search");
    add_problem_options(grid, grid_args, true, false);
    grid->add_option("--steps", grid_steps,
                     "Grid points per pi (resolution pi/steps)")
        ->capture_default_str();

    ProblemArgs build_args;
    std::optional<std::string> build_out;
    auto *build = app.add_subcommand("build", "Write the abstract circuit");
    add_problem_options(build, build_args, true, true);
    build->add_option("--out", build_out, "Output file (default stdout)");

    ProblemArgs compile_problem;
    CompileArgs compile_args;
    auto *compile = app.add_subcommand("compile", "Route and lower a circuit");
    add_problem_options(compile, compile_problem, true, true);
    compile->add_option("--circuit", compile_args.circuit,
                        "Abstract circuit file instead of --problem");
    compile->add_option("--topology", compile_args.topology,
                        "Topology name or JSON file")
        ->capture_default_str();
    compile->add_option("--gateset", compile_args.gateset, "ibm or generic")
        ->capture_default_str();
    compile->add_option("--ancillas", compile_args.ancillas, "Ancilla budget");
    compile->add_flag("--verify", compile_args.verify,
                      "Check equivalence with the abstract circuit");
    compile->add_option("--seed", compile_args.seed, "Layout seed")
        ->capture_default_str();
    compile->add_option("--out", compile_args.out, "Compiled circuit file");

    ProblemArgs sim_problem;
    SimulateArgs sim_args;
    auto *sim = app.add_subcommand("simulate", "Simulate and sample shots");
    add_problem_options(sim, sim_problem, true, true);
    sim->add_option("--circuit", sim_args.circuit, "Circuit file");
    sim->add_option("--shots", sim_args.shots)->capture_default_str();
    sim->add_option("--seed", sim_args.seed)->capture_default_str();
    sim->add_option("--format", sim_args.format, "json or csv")
        ->capture_default_str();
    sim->add_option("--out", sim_args.out, "Output file (default stdout)");

    ProblemArgs run_problem;
    RunArgs run_args;
    auto *run = app.add_subcommand("run", "Repeated-call experiment");
    add_problem_options(run, run_problem, true, true);
    run->add_option("--topology", run_args.topology,
                    "Compile to this topology name or JSON file first");
    run->add_option("--gateset", run_args.gateset, "ibm or generic")
        ->capture_default_str();
    run->add_option("--ancillas", run_args.ancillas, "Ancilla budget");
    run->add_option("--shots", run_args.shots, "Shots per call")
        ->capture_default_str();
    run->add_option("--repeats", run_args.repeats, "Number of calls")
        ->capture_default_str();
    run->add_option("--seed", run_args.seed)->capture_default_str();
    run->add_option("--ni", run_args.ni, "Fairness inner loops")
        ->capture_default_str();
    run->add_option("--calib", run_args.calib, "Calibration JSON");
    run->add_option("--out", run_args.out, "Output directory")
        ->capture_default_str();

    ProblemArgs metrics_problem;
    MetricsArgs metrics_args;
    auto *metrics = app.add_subcommand("metrics", "Score counts or circuits");
    add_problem_options(metrics, metrics_problem, true, false);
    metrics->add_option("--counts", metrics_args.counts, "Counts JSON file");
    metrics->add_flag("--combined", metrics_args.combined,
                      "Merge each ground state with its complement");
    metrics->add_option("--circuit", metrics_args.circuit,
                        "Native circuit file for aggregate error");
    metrics->add_option("--calib", metrics_args.calib, "Calibration JSON");
    metrics->add_flag("--no-readout", metrics_args.no_readout,
                      "Leave readout out of the aggregate error");
    metrics->add_option("--ni", metrics_args.ni, "Fairness inner loops")
        ->capture_default_str();
    metrics->add_option("--seed", metrics_args.seed)->capture_default_str();

    ProblemArgs anneal_problem;
    AnnealArgs anneal_args;
    auto *anneal = app.add_subcommand("anneal", "Annealing-time sweep");
    add_problem_options(anneal, anneal_problem, false, false);
    anneal->add_option("--times", anneal_args.times, "Annealing times")
        ->delimiter(',')
        ->capture_default_str();
    anneal->add_option("--steps-per-time", anneal_args.steps_per_time)
        ->capture_default_str();
    anneal->add_option("--shots", anneal_args.shots)->capture_default_str();
    anneal->add_option("--seed", anneal_args.seed)->capture_default_str();
    anneal->add_option("--ni", anneal_args.ni, "Fairness inner loops")
        ->capture_default_str();
    anneal->add_option("--out", anneal_args.out, "CSV file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (problems->parsed()) {
            return cmd_problems();
        }
        if (grid->parsed()) {
            return cmd_gridsearch(grid_args, grid_steps);
        }
        if (build->parsed()) {
            return cmd_build(build_args, build_out);
        }
        if (compile->parsed()) {
            return cmd_compile(compile_problem, compile_args);
        }
        if (sim->parsed()) {
            return cmd_simulate(sim_problem, sim_args);
        }
        if (run->parsed()) {
            return cmd_run(run_problem, run_args);
        }
        if (metrics->parsed()) {
            return cmd_metrics(metrics_problem, metrics_args);
        }
        if (anneal->parsed()) {
            return cmd_anneal(anneal_problem, anneal_args);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
