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

#include <fairsamp/compiler.hpp>
#include <fairsamp/experiment.hpp>
#include <fairsamp/gmqaoa.hpp>

#include <gtest/gtest.h>

using namespace fairsamp;

namespace {

Circuit qaoa(ProblemId id, bool measure = true) {
    return assemble_qaoa(reduced_problem(id), {{0.61, -1.3}, {0.27, 2.2}}, measure);
}

CompiledCircuit compile(const Circuit &c, const std::string &topo,
                        Gateset g = Gateset::IbmNative) {
    const auto t = resolve_topology(topo, c.n(), std::nullopt);
    return route_and_lower(c, t, g, default_ancilla_budget(c.n(), t));
}

} // namespace

TEST(Topology, BuiltinShapes) {
    EXPECT_EQ(builtin_topology("LNN").size(), 3U);
    EXPECT_EQ(builtin_topology("5T").edges().size(), 4U);
    EXPECT_EQ(builtin_topology("5P").edges().size(), 5U);
    EXPECT_EQ(builtin_topology("6A").edges().size(), 6U);
    EXPECT_EQ(builtin_topology("7H").edges().size(), 6U);
    EXPECT_EQ(builtin_topology("Clique(5)").edges().size(), 10U);
    EXPECT_TRUE(builtin_topology("Clique", 4).is_complete());
    EXPECT_THROW(builtin_topology("Clique"), Error);
    EXPECT_THROW(builtin_topology("9Z"), Error);
    EXPECT_EQ(builtin_topology("7H").distance(0, 6), 4U);
}

TEST(Topology, JsonRoundTripAndValidation) {
    const auto t = builtin_topology("6A");
    const auto back = topology_from_json(to_json(t));
    EXPECT_EQ(back.edges(), t.edges());
    EXPECT_EQ(back.name(), "6A");
    const auto renum = topology_from_json(
        nlohmann::json::parse(R"({"nodes":[10,20,30],"edges":[[10,30],[30,20]]})"));
    EXPECT_TRUE(renum.has_edge(0, 2));
    EXPECT_TRUE(renum.has_edge(1, 2));
    EXPECT_THROW(topology_from_json(nlohmann::json::parse(R"({"nodes":[0,1],"edges":[[0,0]]})")),
                 Error);
    EXPECT_THROW(topology_from_json(nlohmann::json::parse(R"({"nodes":[0,1],"edges":[[0,2]]})")),
                 Error);
}

TEST(Embed, FindsMonomorphism) {
    const InteractionGraph tri{3, {{0, 1}, {0, 2}, {1, 2}}};
    EXPECT_FALSE(embed_layout(tri, builtin_topology("LNN")).has_value());
    EXPECT_FALSE(embed_layout(tri, builtin_topology("6A")).has_value());
    const auto on_clique = embed_layout(tri, clique_topology(4));
    ASSERT_TRUE(on_clique.has_value());

    const InteractionGraph path{3, {{0, 1}, {1, 2}}};
    const auto lnn = builtin_topology("LNN");
    const auto l = embed_layout(path, lnn);
    ASSERT_TRUE(l.has_value());
    for (auto [a, b] : path.edges) {
        EXPECT_TRUE(lnn.has_edge((*l)[a], (*l)[b]));
    }
    const InteractionGraph star{4, {{0, 1}, {0, 2}, {0, 3}}};
    const auto t = builtin_topology("5T");
    const auto s = embed_layout(star, t);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ((*s)[0], 1U);
}

TEST(Embed, SeedOnlyReorders) {
    const InteractionGraph path{4, {{0, 1}, {1, 2}, {2, 3}}};
    const auto topo = builtin_topology("7H");
    for (std::uint64_t seed : {0, 1, 2, 3}) {
        const auto l = embed_layout(path, topo, seed);
        ASSERT_TRUE(l.has_value());
        for (auto [a, b] : path.edges) {
            EXPECT_TRUE(topo.has_edge((*l)[a], (*l)[b]));
        }
        EXPECT_EQ(l, embed_layout(path, topo, seed));
    }
}

TEST(Compiler, AdmittedPairsAreEquivalent) {
    for (auto id : all_problems) {
        for (const auto &topo : admitted_topologies(id)) {
            for (auto gs : {Gateset::IbmNative, Gateset::GenericNative}) {
                const auto abstract = qaoa(id);
                const auto t = resolve_topology(topo, abstract.n(), std::nullopt);
                const auto c = compile(abstract, topo, gs);
                EXPECT_TRUE(verify_equivalence(abstract, c))
                    << problem_letter(id) << " " << topo;
                EXPECT_TRUE(validate(c.circuit, &t).empty())
                    << problem_letter(id) << " " << topo;
                if (topo == "Clique") {
                    EXPECT_EQ(c.swap_count, 0U);
                }
            }
        }
    }
}

TEST(Compiler, UnmeasuredCircuitsEquivalentUpToGlobalPhase) {
    for (auto id : all_problems) {
        for (const auto &topo : admitted_topologies(id)) {
            const auto abstract = qaoa(id, false);
            EXPECT_TRUE(verify_equivalence(abstract, compile(abstract, topo)))
                << problem_letter(id) << " " << topo;
        }
    }
}

TEST(Compiler, HexagonNeedsSwaps) {
    const auto c = compile(qaoa(ProblemId::C), "6A");
    EXPECT_GE(c.swap_count, 1U);
    EXPECT_EQ(c.circuit.n(), 6U);
}

TEST(Compiler, MutationBreaksEquivalence) {
    const auto abstract = qaoa(ProblemId::A, false);
    const auto good = compile(abstract, "5T");
    ASSERT_TRUE(verify_equivalence(abstract, good));
    std::size_t checked = 0;
    for (std::size_t i = 0; i < good.circuit.size(); i += 7) {
        auto bad = good;
        Circuit mutated(good.circuit.n(), good.circuit.gateset());
        for (std::size_t k = 0; k < good.circuit.size(); ++k) {
            if (k != i) {
                mutated.append(good.circuit.gates()[k]);
            }
        }
        mutated.set_out_permutation(good.circuit.out_permutation());
        bad.circuit = mutated;
        EXPECT_FALSE(verify_equivalence(abstract, bad)) << "dropped gate " << i;
        ++checked;
    }
    EXPECT_GT(checked, 5U);
}

TEST(Compiler, MeasuredMutationOfCnotFails) {
    const auto abstract = qaoa(ProblemId::B);
    const auto good = compile(abstract, "5P");
    auto bad = good;
    Circuit mutated(good.circuit.n(), good.circuit.gateset());
    bool dropped = false;
    for (const auto &g : good.circuit.gates()) {
        if (!dropped && g.kind == GateKind::CNOT) {
            dropped = true;
            continue;
        }
        mutated.append(g);
    }
    mutated.set_out_permutation(good.circuit.out_permutation());
    bad.circuit = mutated;
    EXPECT_FALSE(verify_equivalence(abstract, bad));
}

TEST(Compiler, LogicalSwapIsFree) {
    Circuit c(3);
    c.append(gate::h(0)).append(gate::cnot(0, 1)).append(gate::swap(1, 2));
    c.append(gate::cnot(0, 1));
    const auto out = compile(c, "Clique");
    EXPECT_TRUE(verify_equivalence(c, out));
    EXPECT_EQ(out.circuit.count(GateKind::CNOT), 2U);
    EXPECT_EQ(out.swap_count, 0U);
}

TEST(Compiler, RoutedSwapCost) {
    // Triangle interactions on a line need one routed SWAP.
    Circuit c(3);
    c.append(gate::cnot(0, 1)).append(gate::cnot(1, 2)).append(gate::cnot(0, 2));
    const auto out = compile(c, "LNN");
    EXPECT_TRUE(verify_equivalence(c, out));
    EXPECT_EQ(out.swap_count, 1U);
    EXPECT_LE(out.circuit.count(GateKind::CNOT), 3U + 3U);
}

TEST(Compiler, Deterministic) {
    const auto a = compile(qaoa(ProblemId::C), "7H");
    const auto b = compile(qaoa(ProblemId::C), "7H");
    EXPECT_EQ(a.circuit, b.circuit);
    EXPECT_EQ(a.layout_in, b.layout_in);
    EXPECT_EQ(to_text(a.circuit), to_text(b.circuit));
}

TEST(Compiler, GenericGatesetUsesCliffordTNames) {
    const auto out = compile(qaoa(ProblemId::E), "LNN", Gateset::GenericNative);
    for (const auto &g : out.circuit.gates()) {
        EXPECT_TRUE(in_gateset(g.kind, Gateset::GenericNative)) << gate_name(g.kind);
    }
    EXPECT_EQ(out.circuit.count(GateKind::SqrtX), 0U);
}

TEST(Compiler, AncillaBudgetRespected) {
    const auto abstract = qaoa(ProblemId::C);
    const auto t = builtin_topology("Clique(10)");
    for (std::size_t budget : {0, 1, 2, 4}) {
        const auto out = route_and_lower(abstract, t, Gateset::IbmNative, budget);
        EXPECT_LE(out.ancilla.size(), budget);
        EXPECT_TRUE(verify_equivalence(abstract, out)) << budget;
    }
}

TEST(Compiler, Errors) {
    const auto abstract = qaoa(ProblemId::C);
    EXPECT_THROW(route_and_lower(abstract, builtin_topology("LNN"), Gateset::IbmNative, 0),
                 Error);
    EXPECT_THROW(route_and_lower(abstract, builtin_topology("6A"), Gateset::Abstract, 0),
                 Error);
    const auto native = compile(abstract, "6A");
    EXPECT_THROW(route_and_lower(native.circuit, builtin_topology("Clique(8)"),
                                 Gateset::IbmNative, 0),
                 Error);
}

TEST(Compiler, IsAdmitted) {
    EXPECT_TRUE(is_admitted(ProblemId::D, builtin_topology("LNN")));
    EXPECT_FALSE(is_admitted(ProblemId::A, builtin_topology("LNN")));
    EXPECT_TRUE(is_admitted(ProblemId::A, builtin_topology("Clique(5)")));
    EXPECT_FALSE(is_admitted(ProblemId::E, builtin_topology("7H")));
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 4);
    EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 100);
    EXPECT_THROW(parallel_for(
                     10,
                     [](std::size_t i) {
                         if (i == 7) {
                             throw Error("boom");
                         }
                     },
                     3),
                 Error);
}
