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
 * Gate-list rewriting passes shared by the compiler: phase normalization,
 * controlled-phase lifting, multi-controlled phase decomposition, Hadamard
 * expansion and a commutation-aware peephole optimizer.
 *
 * Passes work on plain gate vectors in "phase normal form", where every
 * diagonal single-qubit gate is a Phase(t). All rewrites are exact up to
 * global phase.
 */
#pragma once

#include "circuit.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <vector>

namespace fairsamp::passes {

inline constexpr double angle_epsilon = 1e-12;

/// Fold a Z-exponent into (-1, 1].
inline double fold_exponent(double t) {
    double r = std::fmod(t, 2.0);
    if (r <= -1.0) {
        r += 2.0;
    } else if (r > 1.0) {
        r -= 2.0;
    }
    return r;
}

inline bool is_zero_exponent(double t) {
    return std::abs(fold_exponent(t)) < angle_epsilon;
}

/// S, Sdg, T, Tdg and Rz become Phase gates.
inline std::vector<Gate> normalize_phases(const std::vector<Gate> &in) {
    std::vector<Gate> out;
    out.reserve(in.size());
    for (const auto &g : in) {
        const auto q = g.qubits.empty() ? 0 : g.qubits[0];
        switch (g.kind) {
        case GateKind::S:
            out.push_back(gate::phase(q, 0.5));
            break;
        case GateKind::Sdg:
            out.push_back(gate::phase(q, -0.5));
            break;
        case GateKind::T:
            out.push_back(gate::phase(q, 0.25));
            break;
        case GateKind::Tdg:
            out.push_back(gate::phase(q, -0.25));
            break;
        case GateKind::Rz:
            out.push_back(gate::phase(q, g.param / pi));
            break;
        default:
            out.push_back(g);
        }
    }
    return out;
}

/// CNOT(a,b) P_b(t) CNOT(a,b) -> P_a(t) P_b(t) CP(a,b,-2t).
inline std::vector<Gate> lift_controlled_phases(const std::vector<Gate> &in) {
    std::vector<Gate> out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (i + 2 < in.size() && in[i].kind == GateKind::CNOT &&
            in[i + 1].kind == GateKind::Phase && in[i + 2] == in[i] &&
            in[i + 1].qubits[0] == in[i].qubits[1]) {
            const auto a = in[i].qubits[0];
            const auto b = in[i].qubits[1];
            const double t = in[i + 1].param;
            out.push_back(gate::phase(a, t));
            out.push_back(gate::phase(b, t));
            out.push_back(gate::cphase(a, b, -2.0 * t));
            i += 2;
            continue;
        }
        out.push_back(in[i]);
    }
    return out;
}

/// H = S SX S up to global phase.
inline std::vector<Gate> expand_hadamards(const std::vector<Gate> &in) {
    std::vector<Gate> out;
    out.reserve(in.size());
    for (const auto &g : in) {
        if (g.kind == GateKind::H) {
            out.push_back(gate::phase(g.qubits[0], 0.5));
            out.push_back(gate::sqrt_x(g.qubits[0]));
            out.push_back(gate::phase(g.qubits[0], 0.5));
        } else {
            out.push_back(g);
        }
    }
    return out;
}

/**
 * Rewrites MultiControlledPhase and Toffoli into CP, CNOT, H and Phase.
 *
 * MCP(Q, t) with target tau = Q.back(), control c = Q[m-2] and the rest R:
 *   MCP(R+c, t/2); P_tau(t/4) X^R P_tau(-t/4) CX(c,tau) P_tau(t/4) X^R
 *   P_tau(-t/4) CX(c,tau)
 * where X^R is a multi-controlled X implemented only up to a diagonal phase
 * on R. Each X^R is emitted in a pair with opposite sign so that the
 * residual phases cancel. With four or more operands and a free ancilla the
 * AND of the first two operands is computed into the ancilla instead.
 */
class McpDecomposer {
  public:
    McpDecomposer(std::size_t first_ancilla, std::size_t ancilla_budget)
        : first_ancilla_(first_ancilla), budget_(ancilla_budget) {}

    [[nodiscard]] const std::vector<Gate> &gates() const { return out_; }
    /// Number of distinct ancilla wires that were used.
    [[nodiscard]] std::size_t ancillas_used() const { return max_used_; }

    void run(const std::vector<Gate> &in) {
        for (const auto &g : in) {
            if (g.kind == GateKind::MultiControlledPhase) {
                emit_mcp(g.qubits, g.param);
            } else if (g.kind == GateKind::Toffoli) {
                const auto tau = g.qubits[2];
                out_.push_back(gate::h(tau));
                emit_mcp(g.qubits, 1.0);
                out_.push_back(gate::h(tau));
            } else {
                out_.push_back(g);
            }
        }
    }

    void emit_mcp(const std::vector<std::size_t> &q, double t) {
        if (is_zero_exponent(t)) {
            return;
        }
        const std::size_t m = q.size();
        if (m == 1) {
            out_.push_back(gate::phase(q[0], t));
            return;
        }
        if (m == 2) {
            out_.push_back(gate::cphase(q[0], q[1], t));
            return;
        }
        if (m >= 4 && in_use_.size() < budget_) {
            const auto an = acquire();
            const std::vector<std::size_t> pair{q[0], q[1]};
            std::vector<std::size_t> reduced{an};
            reduced.insert(reduced.end(), q.begin() + 2, q.end());
            mcx_half(pair, an, +1);
            emit_mcp(reduced, t);
            mcx_half(pair, an, -1);
            release(an);
            return;
        }
        const auto tau = q[m - 1];
        const auto c = q[m - 2];
        const std::vector<std::size_t> rest(q.begin(), q.begin() + (m - 2));
        std::vector<std::size_t> controls = rest;
        controls.push_back(c);
        emit_mcp(controls, t / 2);
        target_sequence(rest, c, tau, t);
    }

  private:
    /// Phase t*AND(R)*c*tau - (t/2)*AND(R)*c, built from X^R pairs.
    void target_sequence(const std::vector<std::size_t> &rest, std::size_t c,
                         std::size_t tau, double t) {
        out_.push_back(gate::phase(tau, t / 4));
        mcx_half(rest, tau, +1);
        out_.push_back(gate::phase(tau, -t / 4));
        out_.push_back(gate::cnot(c, tau));
        out_.push_back(gate::phase(tau, t / 4));
        mcx_half(rest, tau, -1);
        out_.push_back(gate::phase(tau, -t / 4));
        out_.push_back(gate::cnot(c, tau));
    }

    /// X on tau controlled by AND(R), times MCP(R, -s/2).
    void mcx_half(const std::vector<std::size_t> &r, std::size_t tau, int s) {
        if (r.size() == 1) {
            out_.push_back(gate::cnot(r[0], tau));
            return;
        }
        const std::vector<std::size_t> rest(r.begin(), r.end() - 1);
        out_.push_back(gate::h(tau));
        target_sequence(rest, r.back(), tau, static_cast<double>(s));
        out_.push_back(gate::h(tau));
    }

    std::size_t acquire() {
        std::size_t a = first_ancilla_;
        while (in_use_.count(a) != 0) {
            ++a;
        }
        in_use_.insert(a);
        max_used_ = std::max(max_used_, a - first_ancilla_ + 1);
        return a;
    }

    void release(std::size_t a) { in_use_.erase(a); }

    std::size_t first_ancilla_;
    std::size_t budget_;
    std::set<std::size_t> in_use_;
    std::size_t max_used_ = 0;
    std::vector<Gate> out_;
};

namespace detail {

inline bool shares_qubit(const Gate &a, const Gate &b) {
    for (auto q : a.qubits) {
        if (b.acts_on(q)) {
            return true;
        }
    }
    return false;
}

inline bool same_qubit_set(const Gate &a, const Gate &b) {
    if (a.qubits.size() != b.qubits.size()) {
        return false;
    }
    for (auto q : a.qubits) {
        if (!b.acts_on(q)) {
            return false;
        }
    }
    return true;
}

inline bool is_x_like(GateKind k) {
    return k == GateKind::X || k == GateKind::SqrtX;
}

/// Whether `g` can move from after `h` to before it without changing.
inline bool commutes(const Gate &g, const Gate &h) {
    if (g.kind == GateKind::Measure || h.kind == GateKind::Measure) {
        return false;
    }
    if (is_diagonal(g.kind) && is_diagonal(h.kind)) {
        return true;
    }
    auto diag_cnot = [](const Gate &d, const Gate &cx) {
        return is_diagonal(d.kind) && cx.kind == GateKind::CNOT &&
               !d.acts_on(cx.qubits[1]);
    };
    if (diag_cnot(g, h) || diag_cnot(h, g)) {
        return true;
    }
    auto x_cnot = [](const Gate &x, const Gate &cx) {
        return is_x_like(x.kind) && cx.kind == GateKind::CNOT &&
               x.qubits[0] == cx.qubits[1];
    };
    if (x_cnot(g, h) || x_cnot(h, g)) {
        return true;
    }
    if (is_x_like(g.kind) && is_x_like(h.kind)) {
        return true;
    }
    if (g.kind == GateKind::CNOT && h.kind == GateKind::CNOT) {
        return g.qubits[0] != h.qubits[1] && g.qubits[1] != h.qubits[0];
    }
    return false;
}

/// Result of fusing h (earlier) and g (later): nullopt when they do not
/// fuse, an empty vector when they cancel.
inline std::optional<std::vector<Gate>> fuse(const Gate &h, const Gate &g) {
    if (!same_qubit_set(h, g)) {
        return std::nullopt;
    }
    if (h.kind == g.kind &&
        (g.kind == GateKind::Phase || g.kind == GateKind::ControlledPhase ||
         g.kind == GateKind::MultiControlledPhase)) {
        const double t = fold_exponent(h.param + g.param);
        if (std::abs(t) < angle_epsilon) {
            return std::vector<Gate>{};
        }
        return std::vector<Gate>{Gate{g.kind, h.qubits, t}};
    }
    if (h.kind != g.kind) {
        return std::nullopt;
    }
    switch (g.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::Swap:
        return std::vector<Gate>{};
    case GateKind::SqrtX:
        return std::vector<Gate>{gate::x(g.qubits[0])};
    case GateKind::CNOT:
        if (h.qubits == g.qubits) {
            return std::vector<Gate>{};
        }
        return std::nullopt;
    case GateKind::Toffoli:
        if (h.qubits[2] == g.qubits[2]) {
            return std::vector<Gate>{};
        }
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

} // namespace detail

/**
 * Backward-scan peephole optimizer. Each incoming gate travels toward the
 * front of the list past gates it commutes with (a Phase crossing an X on
 * its qubit flips sign) until it fuses with a partner or is blocked.
 */
class Peephole {
  public:
    void add(Gate g) { add_before(std::move(g), out_.size()); }

    void add_all(const std::vector<Gate> &gates) {
        for (const auto &g : gates) {
            add(g);
        }
    }

    [[nodiscard]] const std::vector<Gate> &gates() const { return out_; }
    std::vector<Gate> take() { return std::move(out_); }

  private:
    void add_before(Gate g, std::size_t end) {
        if ((g.kind == GateKind::Phase || g.kind == GateKind::ControlledPhase ||
             g.kind == GateKind::MultiControlledPhase) &&
            is_zero_exponent(g.param)) {
            return;
        }
        std::size_t k = end;
        while (k > 0) {
            const Gate &h = out_[k - 1];
            if (!detail::shares_qubit(g, h)) {
                --k;
                continue;
            }
            if (auto fused = detail::fuse(h, g)) {
                out_.erase(out_.begin() + static_cast<std::ptrdiff_t>(k - 1));
                std::size_t at = k - 1;
                for (auto &f : *fused) {
                    const auto before = out_.size();
                    add_before(std::move(f), at);
                    at += out_.size() - before;
                }
                return;
            }
            if (g.kind == GateKind::Phase && h.kind == GateKind::X) {
                g.param = -g.param;
                --k;
                continue;
            }
            if (detail::commutes(g, h)) {
                --k;
                continue;
            }
            break;
        }
        out_.insert(out_.begin() + static_cast<std::ptrdiff_t>(k),
                    std::move(g));
    }

    std::vector<Gate> out_;
};

inline std::vector<Gate> peephole(const std::vector<Gate> &in) {
    Peephole p;
    p.add_all(in);
    return p.take();
}

/// True when every qubit is measured and nothing follows its measurement.
inline bool measures_all(const std::vector<Gate> &gates, std::size_t n) {
    std::vector<bool> measured(n, false);
    for (const auto &g : gates) {
        for (auto q : g.qubits) {
            if (measured[q]) {
                return false;
            }
        }
        if (g.kind == GateKind::Measure) {
            measured[g.qubits[0]] = true;
        }
    }
    return std::all_of(measured.begin(), measured.end(),
                       [](bool b) { return b; });
}

/// Remove Phase gates that commute forward into a Z-basis measurement.
inline std::vector<Gate> drop_final_diagonals(std::vector<Gate> gates) {
    for (std::size_t i = gates.size(); i-- > 0;) {
        const Gate &g = gates[i];
        if (g.kind != GateKind::Phase) {
            continue;
        }
        bool reaches_measure = false;
        bool blocked = false;
        for (std::size_t j = i + 1; j < gates.size() && !blocked; ++j) {
            const Gate &h = gates[j];
            if (!detail::shares_qubit(g, h)) {
                continue;
            }
            if (h.kind == GateKind::Measure) {
                reaches_measure = true;
                break;
            }
            blocked = !detail::commutes(g, h);
        }
        if (reaches_measure && !blocked) {
            gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    return gates;
}

} // namespace fairsamp::passes
