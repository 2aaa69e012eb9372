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

// Library walk-through: optimize one-round angles for the triangle problem,
// compile to a three-qubit line, sample, and score the samples.

#include <fairsamp/fairsamp.hpp>

#include <cstdio>

int main() {
    using namespace fairsamp;
    try {
        const IsingModel model = reduced_problem(ProblemId::E);
        const GroundSet ground = enumerate_ground_states(model);
        const auto best = grid_search(model);
        std::printf("optimum energy %.3f, gsp %.3f\n", best.energy, best.gsp);

        const Circuit abstract = assemble_qaoa(model, best.params);
        const Topology line = builtin_topology("LNN");
        const auto compiled = route_and_lower(abstract, line, Gateset::IbmNative,
                                              default_ancilla_budget(model.n(), line));
        std::printf("compiled: %zu gates, %zu cnots, equivalent=%d\n",
                    compiled.circuit.size(), compiled.circuit.count(GateKind::CNOT),
                    verify_equivalence(abstract, compiled) ? 1 : 0);

        const auto probs =
            logical_probabilities(simulate(compiled.circuit), compiled.layout_out);
        const auto counts = sample_probabilities(probs, model.n(), 8192, 1);
        FairnessConfig cfg;
        cfg.inner_loops = 2000;
        const auto fair = fairness_nstr(ground_counts(counts, ground), cfg, 2);
        std::printf("sampled gsp %.4f, fairness shots %s\n", gsp(counts, ground),
                    fair.to_string().c_str());
    } catch (const Error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
