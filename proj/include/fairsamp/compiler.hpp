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
 * Topology-aware compilation: layout, SWAP routing with permutation
 * tracking, lowering to the IBM or generic native gateset, and an
 * equivalence check against the abstract circuit.
 *
 * Pipeline:
 *   1. phase normal form, CNOT-P-CNOT lifted to CP
 *   2. MCP / Toffoli decomposition (AND ancillas drawn from the budget)
 *   3. H -> S SX S, peephole
 *   4. layout: subgraph embedding, else best injection by routed SWAP count
 *   5. greedy SWAP routing; SWAPs permute the layout and are never undone
 *   6. CP and SWAP lowered to CNOTs oriented for cancellation, peephole
 *   7. phases in front of the final measurement removed
 *   8. gateset emission
 */
#pragma once

#include "circuit.hpp"
#include "passes.hpp"
#include "topology.hpp"
#include "unitary.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace fairsamp {

struct InteractionGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; ///< a < b, sorted

    [[nodiscard]] bool has_edge(std::size_t a, std::size_t b) const {
        if (a > b) {
            std::swap(a, b);
        }
        return std::binary_search(edges.begin(), edges.end(),
                                  std::make_pair(a, b));
    }
};

inline InteractionGraph interaction_graph(std::size_t n,
                                          const std::vector<Gate> &gates) {
    std::set<std::pair<std::size_t, std::size_t>> e;
    for (const auto &g : gates) {
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            for (std::size_t j = i + 1; j < g.qubits.size(); ++j) {
                e.emplace(std::min(g.qubits[i], g.qubits[j]),
                          std::max(g.qubits[i], g.qubits[j]));
            }
        }
    }
    return {n, {e.begin(), e.end()}};
}

inline InteractionGraph interaction_graph(const Circuit &c) {
    return interaction_graph(c.n(), c.gates());
}

using Layout = std::vector<std::size_t>; ///< logical -> physical

/**
 * Subgraph monomorphism of `graph` into `topology` by backtracking, or
 * nullopt when none exists. Candidate physical qubits are tried in an order
 * shuffled by `seed`.
 */
inline std::optional<Layout> embed_layout(const InteractionGraph &graph,
                                          const Topology &topology,
                                          std::uint64_t seed = 0) {
    const std::size_t n = graph.n;
    const std::size_t N = topology.size();
    if (n > N) {
        return std::nullopt;
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : graph.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (adj[v].size() > N - 1) {
            return std::nullopt;
        }
    }
    // Visit logical qubits by BFS from the highest-degree vertex so each new
    // vertex tends to have an already placed neighbour.
    std::vector<std::size_t> order;
    std::vector<bool> seen(n, false);
    while (order.size() < n) {
        std::size_t start = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!seen[v] && (start == n || adj[v].size() > adj[start].size())) {
                start = v;
            }
        }
        seen[start] = true;
        std::vector<std::size_t> frontier{start};
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (auto u : frontier) {
                order.push_back(u);
                auto nb = adj[u];
                std::sort(nb.begin(), nb.end(), [&](auto x, auto y) {
                    return adj[x].size() > adj[y].size() ||
                           (adj[x].size() == adj[y].size() && x < y);
                });
                for (auto w : nb) {
                    if (!seen[w]) {
                        seen[w] = true;
                        next.push_back(w);
                    }
                }
            }
            frontier = std::move(next);
        }
    }
    std::vector<std::size_t> candidates(N);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    if (seed != 0) {
        Rng rng(seed);
        for (std::size_t i = N; i > 1; --i) {
            std::swap(candidates[i - 1], candidates[rng() % i]);
        }
    }
    Layout layout(n, N);
    std::vector<bool> used(N, false);
    auto place = [&](auto &&self, std::size_t depth) -> bool {
        if (depth == n) {
            return true;
        }
        const auto v = order[depth];
        for (auto p : candidates) {
            if (used[p] || topology.neighbors(p).size() < adj[v].size()) {
                continue;
            }
            bool ok = true;
            for (auto w : adj[v]) {
                if (layout[w] != N && !topology.has_edge(p, layout[w])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                continue;
            }
            layout[v] = p;
            used[p] = true;
            if (self(self, depth + 1)) {
                return true;
            }
            used[p] = false;
            layout[v] = N;
        }
        return false;
    };
    if (!place(place, 0)) {
        return std::nullopt;
    }
    return layout;
}

struct CompiledCircuit {
    /// Native circuit over all topology qubits; its out_permutation maps the
    /// physical position of each wire at the start to its position at the end.
    Circuit circuit{1};
    Layout layout_in;  ///< logical -> physical at the start
    Layout layout_out; ///< logical -> physical after all SWAPs
    std::vector<std::size_t> ancilla; ///< physical qubits used as ancillas
    std::size_t swap_count = 0;
};

namespace detail {

struct RouteResult {
    std::vector<Gate> gates; ///< physical gates, SWAPs still abstract
    std::vector<std::size_t> wire_out; ///< wire -> physical at the end
    std::vector<std::size_t> perm;     ///< physical start -> physical end
    std::size_t swaps = 0;
};

/// Number of upcoming two-qubit gates weighed by the SWAP selection.
inline constexpr std::size_t route_lookahead = 8;

/**
 * Greedy router. Before each two-qubit gate on non-adjacent qubits it
 * applies a SWAP that moves one operand one step along a shortest path,
 * choosing by (lookahead distance sum, reuse of the last interaction edge,
 * smallest edge). Logical SWAP gates only relabel the layout.
 */
inline RouteResult route(const std::vector<Gate> &gates, std::size_t wires,
                         const Layout &layout, const Topology &topo) {
    const std::size_t N = topo.size();
    std::vector<std::size_t> w2p = layout;
    std::vector<std::size_t> p2w(N, wires);
    for (std::size_t w = 0; w < wires; ++w) {
        p2w[w2p[w]] = w;
    }
    std::vector<std::size_t> content(N); // physical -> start position held
    std::iota(content.begin(), content.end(), std::size_t{0});

    std::vector<std::size_t> two_q;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].qubits.size() == 2 && gates[i].kind != GateKind::Swap) {
            two_q.push_back(i);
        }
    }
    RouteResult r;
    std::pair<std::size_t, std::size_t> last_edge{N, N};
    std::size_t next_two_q = 0;

    auto apply_swap = [&](std::size_t a, std::size_t b) {
        std::swap(p2w[a], p2w[b]);
        if (p2w[a] != wires) {
            w2p[p2w[a]] = a;
        }
        if (p2w[b] != wires) {
            w2p[p2w[b]] = b;
        }
        std::swap(content[a], content[b]);
    };

    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate &g = gates[i];
        if (g.kind == GateKind::Swap) {
            const auto a = g.qubits[0];
            const auto b = g.qubits[1];
            std::swap(w2p[a], w2p[b]);
            p2w[w2p[a]] = a;
            p2w[w2p[b]] = b;
            continue;
        }
        if (g.qubits.size() == 2) {
            while (next_two_q < two_q.size() && two_q[next_two_q] < i) {
                ++next_two_q;
            }
            const auto u = g.qubits[0];
            const auto v = g.qubits[1];
            while (topo.distance(w2p[u], w2p[v]) > 1) {
                const auto pu = w2p[u];
                const auto pv = w2p[v];
                const auto d = topo.distance(pu, pv);
                struct Cand {
                    std::size_t cost;
                    int reuse;
                    std::pair<std::size_t, std::size_t> edge;
                };
                std::optional<Cand> best;
                auto consider = [&](std::size_t from, std::size_t other) {
                    for (auto x : topo.neighbors(from)) {
                        if (topo.distance(x, other) >= d) {
                            continue;
                        }
                        apply_swap(from, x);
                        std::size_t cost = 0;
                        for (std::size_t k = next_two_q;
                             k < two_q.size() &&
                             k < next_two_q + route_lookahead;
                             ++k) {
                            const Gate &f = gates[two_q[k]];
                            cost += topo.distance(w2p[f.qubits[0]],
                                                  w2p[f.qubits[1]]);
                        }
                        apply_swap(from, x);
                        const auto edge =
                            std::make_pair(std::min(from, x), std::max(from, x));
                        const int reuse = edge == last_edge ? 0 : 1;
                        Cand c{cost, reuse, edge};
                        if (!best ||
                            std::tie(c.cost, c.reuse, c.edge) <
                                std::tie(best->cost, best->reuse, best->edge)) {
                            best = c;
                        }
                    }
                };
                consider(pu, pv);
                consider(pv, pu);
                require(best.has_value(), "router found no SWAP candidate");
                r.gates.push_back(gate::swap(best->edge.first, best->edge.second));
                apply_swap(best->edge.first, best->edge.second);
                last_edge = best->edge;
                ++r.swaps;
            }
            last_edge = std::make_pair(std::min(w2p[u], w2p[v]),
                                       std::max(w2p[u], w2p[v]));
        }
        Gate pg = g;
        for (auto &q : pg.qubits) {
            q = w2p[q];
        }
        r.gates.push_back(std::move(pg));
    }
    r.wire_out = std::vector<std::size_t>(w2p.begin(), w2p.begin() + wires);
    r.perm.assign(N, 0);
    for (std::size_t p = 0; p < N; ++p) {
        r.perm[content[p]] = p;
    }
    return r;
}

inline bool is_cnot_on(const Gate &g, std::size_t a, std::size_t b) {
    return g.kind == GateKind::CNOT &&
           ((g.qubits[0] == a && g.qubits[1] == b) ||
            (g.qubits[0] == b && g.qubits[1] == a));
}

/// CP and SWAP in CNOT form, oriented so CNOTs on a shared edge meet.
inline std::vector<Gate> lower_two_qubit(const std::vector<Gate> &in) {
    std::vector<Gate> out;
    auto last_on = [&](std::size_t a, std::size_t b) -> const Gate * {
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (it->acts_on(a) || it->acts_on(b)) {
                return &*it;
            }
        }
        return nullptr;
    };
    auto next_on = [&](std::size_t i, std::size_t a,
                       std::size_t b) -> const Gate * {
        for (std::size_t j = i + 1; j < in.size(); ++j) {
            if (in[j].acts_on(a) || in[j].acts_on(b)) {
                return &in[j];
            }
        }
        return nullptr;
    };
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Gate &g = in[i];
        if (g.kind == GateKind::ControlledPhase) {
            auto x = g.qubits[0];
            auto y = g.qubits[1];
            if (const Gate *prev = last_on(x, y);
                prev != nullptr && is_cnot_on(*prev, x, y)) {
                x = prev->qubits[0];
                y = prev->qubits[1];
            }
            const double h = g.param / 2;
            const Gate *next = next_on(i, x, y);
            const bool swap_follows = next != nullptr &&
                                      next->kind == GateKind::Swap &&
                                      next->acts_on(x) && next->acts_on(y);
            if (swap_follows) {
                out.push_back(gate::phase(x, h));
                out.push_back(gate::phase(y, h));
            }
            out.push_back(gate::cnot(x, y));
            out.push_back(gate::phase(y, -h));
            out.push_back(gate::cnot(x, y));
            if (!swap_follows) {
                out.push_back(gate::phase(x, h));
                out.push_back(gate::phase(y, h));
            }
            continue;
        }
        if (g.kind == GateKind::Swap) {
            auto x = g.qubits[0];
            auto y = g.qubits[1];
            const Gate *prev = last_on(x, y);
            const Gate *next = next_on(i, x, y);
            if (prev != nullptr && is_cnot_on(*prev, x, y)) {
                x = prev->qubits[0];
                y = prev->qubits[1];
            } else if (next != nullptr && is_cnot_on(*next, x, y)) {
                x = next->qubits[0];
                y = next->qubits[1];
            }
            out.push_back(gate::cnot(x, y));
            out.push_back(gate::cnot(y, x));
            out.push_back(gate::cnot(x, y));
            continue;
        }
        out.push_back(g);
    }
    return out;
}

inline std::vector<Gate> emit_ibm(const std::vector<Gate> &in) {
    std::vector<Gate> out;
    for (const auto &g : in) {
        if (g.kind == GateKind::Phase) {
            out.push_back(gate::rz(g.qubits[0], pi * g.param));
        } else {
            out.push_back(g);
        }
    }
    return out;
}

inline std::vector<Gate> emit_generic(const std::vector<Gate> &in) {
    std::vector<Gate> expanded;
    for (const auto &g : in) {
        if (g.kind == GateKind::X || g.kind == GateKind::SqrtX) {
            const auto q = g.qubits[0];
            expanded.push_back(gate::h(q));
            expanded.push_back(
                gate::phase(q, g.kind == GateKind::X ? 1.0 : 0.5));
            expanded.push_back(gate::h(q));
        } else {
            expanded.push_back(g);
        }
    }
    std::vector<Gate> out;
    for (const auto &g : passes::peephole(expanded)) {
        if (g.kind != GateKind::Phase) {
            out.push_back(g);
            continue;
        }
        const auto q = g.qubits[0];
        const double t = passes::fold_exponent(g.param);
        auto near = [t](double v) { return std::abs(t - v) < 1e-12; };
        if (near(0.25)) {
            out.push_back(gate::t(q));
        } else if (near(-0.25)) {
            out.push_back(gate::tdg(q));
        } else if (near(0.5)) {
            out.push_back(gate::s(q));
        } else if (near(-0.5)) {
            out.push_back(gate::sdg(q));
        } else {
            out.push_back(gate::rz(q, pi * t));
        }
    }
    return out;
}

} // namespace detail

/// Default ancilla budget: every physical qubit not holding a logical one.
inline std::size_t default_ancilla_budget(std::size_t logical,
                                          const Topology &topology) {
    return topology.size() > logical ? topology.size() - logical : 0;
}

/// Largest injection search performed when no embedding exists.
inline constexpr std::size_t max_layout_candidates = 40320;

/**
 * Compile an abstract circuit onto `topology` in the given native gateset.
 * Throws when the circuit does not fit or is already native.
 */
inline CompiledCircuit route_and_lower(const Circuit &circuit,
                                       const Topology &topology,
                                       Gateset gateset,
                                       std::size_t ancilla_budget,
                                       std::uint64_t seed = 0) {
    const std::size_t n = circuit.n();
    const std::size_t N = topology.size();
    require(circuit.gateset() == Gateset::Abstract,
            "route_and_lower expects an abstract circuit");
    require(gateset != Gateset::Abstract,
            "route_and_lower needs a native target gateset");
    require(n + ancilla_budget <= N,
            "circuit needs " + std::to_string(n) + " qubits plus " +
                std::to_string(ancilla_budget) + " ancillas but topology '" +
                topology.name() + "' has " + std::to_string(N));

    auto gates = passes::lift_controlled_phases(
        passes::normalize_phases(circuit.gates()));
    passes::McpDecomposer dec(n, ancilla_budget);
    dec.run(gates);
    const std::size_t wires = n + dec.ancillas_used();
    gates = passes::peephole(passes::expand_hadamards(dec.gates()));

    const auto graph = interaction_graph(wires, gates);
    Layout layout;
    if (auto embedded = embed_layout(graph, topology, seed)) {
        layout = *embedded;
    } else {
        // Lexicographic enumeration of injections wires -> nodes.
        std::vector<std::size_t> nodes(N);
        std::iota(nodes.begin(), nodes.end(), std::size_t{0});
        std::optional<std::size_t> best_swaps;
        std::size_t tried = 0;
        Layout cand(wires);
        std::vector<bool> used(N, false);
        auto enumerate = [&](auto &&self, std::size_t depth) -> void {
            if (tried >= max_layout_candidates) {
                return;
            }
            if (depth == wires) {
                ++tried;
                const auto r = detail::route(gates, wires, cand, topology);
                if (!best_swaps || r.swaps < *best_swaps) {
                    best_swaps = r.swaps;
                    layout = cand;
                }
                return;
            }
            for (std::size_t p = 0; p < N; ++p) {
                if (!used[p]) {
                    used[p] = true;
                    cand[depth] = p;
                    self(self, depth + 1);
                    used[p] = false;
                }
            }
        };
        enumerate(enumerate, 0);
        require(best_swaps.has_value(), "no layout found for topology '" +
                                            topology.name() + "'");
    }

    const auto routed = detail::route(gates, wires, layout, topology);
    auto phys = passes::peephole(detail::lower_two_qubit(routed.gates));
    if (passes::measures_all(circuit.gates(), n)) {
        phys = passes::drop_final_diagonals(std::move(phys));
    }
    phys = gateset == Gateset::IbmNative ? detail::emit_ibm(phys)
                                         : detail::emit_generic(phys);

    CompiledCircuit out;
    out.circuit = Circuit(N, gateset);
    for (auto &g : phys) {
        out.circuit.append(std::move(g));
    }
    out.circuit.set_out_permutation(routed.perm);
    out.layout_in.assign(layout.begin(), layout.begin() + n);
    out.layout_out.assign(routed.wire_out.begin(), routed.wire_out.begin() + n);
    for (std::size_t w = n; w < wires; ++w) {
        out.ancilla.push_back(layout[w]);
    }
    out.swap_count = routed.swaps;
    return out;
}

inline constexpr double equivalence_tolerance = 1e-8;

/**
 * Whether `compiled` implements `abstract`: with idle and ancilla qubits
 * prepared and post-selected in |up>, logical inputs placed by layout_in
 * and outputs read at layout_out, the induced map must equal the abstract
 * unitary up to global phase. When the abstract circuit ends by measuring
 * every qubit, a diagonal phase in front of the measurement is also allowed.
 */
inline bool verify_equivalence(const Circuit &abstract,
                               const CompiledCircuit &compiled,
                               double tolerance = equivalence_tolerance) {
    const std::size_t n = abstract.n();
    const std::size_t N = compiled.circuit.n();
    require(N <= max_unitary_qubits && n <= max_unitary_qubits,
            "verify_equivalence limited to " +
                std::to_string(max_unitary_qubits) + " qubits");
    require(compiled.layout_in.size() == n && compiled.layout_out.size() == n,
            "compiled layout does not match the abstract circuit");
    const bool measured = passes::measures_all(abstract.gates(), n);
    const Matrix ua = unitary_of(abstract.without_measurements());

    std::vector<Matrix> locals;
    std::vector<const Gate *> ops;
    for (const auto &g : compiled.circuit.gates()) {
        if (g.kind != GateKind::Measure) {
            locals.push_back(gate_matrix(g));
            ops.push_back(&g);
        }
    }
    auto place = [](Basis x, const Layout &layout) {
        Basis y = 0;
        for (std::size_t q = 0; q < layout.size(); ++q) {
            if (bit_of(x, q)) {
                y |= Basis{1} << layout[q];
            }
        }
        return y;
    };
    const std::size_t dim = std::size_t{1} << n;
    Matrix b(dim);
    std::vector<complex_t> col(std::size_t{1} << N);
    for (Basis x = 0; x < dim; ++x) {
        std::fill(col.begin(), col.end(), complex_t{});
        col[place(x, compiled.layout_in)] = 1.0;
        for (std::size_t k = 0; k < locals.size(); ++k) {
            apply_local_matrix(col, locals[k], ops[k]->qubits);
        }
        double kept = 0.0;
        for (Basis y = 0; y < dim; ++y) {
            b(y, x) = col[place(y, compiled.layout_out)];
            kept += std::norm(b(y, x));
        }
        if (std::abs(1.0 - kept) > tolerance) {
            return false;
        }
    }
    if (!measured) {
        return equal_up_to_phase(b, ua, tolerance);
    }
    const Matrix d = b * ua.adjoint();
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double mag = std::abs(d(r, c));
            if (r == c ? std::abs(mag - 1.0) > tolerance : mag > tolerance) {
                return false;
            }
        }
    }
    return true;
}

} // namespace fairsamp
