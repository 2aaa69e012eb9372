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
 * Gate-level circuit representation.
 *
 * Conventions used everywhere in the library:
 *   Rz(theta)  = diag(e^{-i theta/2}, e^{i theta/2})
 *   Phase(t)   = Z^t = diag(1, e^{i pi t}); S = Phase(1/2), T = Phase(1/4)
 *   ControlledPhase(t) and MultiControlledPhase(t) multiply the all-ones
 *   basis state of their operands by e^{i pi t}; both are symmetric in their
 *   operands.
 *   CNOT operands are (control, target); Toffoli operands are
 *   (control, control, target).
 * Global phase is never tracked.
 */
#pragma once

#include "common.hpp"
#include "topology.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fairsamp {

enum class GateKind {
    H,
    X,
    SqrtX,
    S,
    Sdg,
    T,
    Tdg,
    Rz,
    Phase,
    CNOT,
    ControlledPhase,
    Toffoli,
    MultiControlledPhase,
    Swap,
    Measure,
};

inline constexpr std::string_view gate_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::SqrtX:
        return "SX";
    case GateKind::S:
        return "S";
    case GateKind::Sdg:
        return "SDG";
    case GateKind::T:
        return "T";
    case GateKind::Tdg:
        return "TDG";
    case GateKind::Rz:
        return "RZ";
    case GateKind::Phase:
        return "P";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::ControlledPhase:
        return "CP";
    case GateKind::Toffoli:
        return "CCX";
    case GateKind::MultiControlledPhase:
        return "MCP";
    case GateKind::Swap:
        return "SWAP";
    case GateKind::Measure:
        return "MEASURE";
    }
    return "?";
}

inline constexpr bool has_parameter(GateKind k) {
    return k == GateKind::Rz || k == GateKind::Phase ||
           k == GateKind::ControlledPhase ||
           k == GateKind::MultiControlledPhase;
}

/// Fixed operand count, or 0 for MultiControlledPhase (any count >= 1).
inline constexpr std::size_t gate_arity(GateKind k) {
    switch (k) {
    case GateKind::CNOT:
    case GateKind::ControlledPhase:
    case GateKind::Swap:
        return 2;
    case GateKind::Toffoli:
        return 3;
    case GateKind::MultiControlledPhase:
        return 0;
    default:
        return 1;
    }
}

inline constexpr bool is_diagonal(GateKind k) {
    switch (k) {
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::Rz:
    case GateKind::Phase:
    case GateKind::ControlledPhase:
    case GateKind::MultiControlledPhase:
        return true;
    default:
        return false;
    }
}

struct Gate {
    GateKind kind;
    std::vector<std::size_t> qubits;
    double param = 0.0;

    bool operator==(const Gate &) const = default;

    [[nodiscard]] bool acts_on(std::size_t q) const {
        return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
    }
};

namespace gate {
inline Gate h(std::size_t q) { return {GateKind::H, {q}}; }
inline Gate x(std::size_t q) { return {GateKind::X, {q}}; }
inline Gate sqrt_x(std::size_t q) { return {GateKind::SqrtX, {q}}; }
inline Gate s(std::size_t q) { return {GateKind::S, {q}}; }
inline Gate sdg(std::size_t q) { return {GateKind::Sdg, {q}}; }
inline Gate t(std::size_t q) { return {GateKind::T, {q}}; }
inline Gate tdg(std::size_t q) { return {GateKind::Tdg, {q}}; }
inline Gate rz(std::size_t q, double theta) {
    return {GateKind::Rz, {q}, theta};
}
inline Gate phase(std::size_t q, double t) {
    return {GateKind::Phase, {q}, t};
}
inline Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, {control, target}};
}
inline Gate cphase(std::size_t a, std::size_t b, double t) {
    return {GateKind::ControlledPhase, {a, b}, t};
}
inline Gate toffoli(std::size_t c0, std::size_t c1, std::size_t target) {
    return {GateKind::Toffoli, {c0, c1, target}};
}
inline Gate mcphase(std::vector<std::size_t> qubits, double t) {
    return {GateKind::MultiControlledPhase, std::move(qubits), t};
}
inline Gate swap(std::size_t a, std::size_t b) {
    return {GateKind::Swap, {a, b}};
}
inline Gate measure(std::size_t q) { return {GateKind::Measure, {q}}; }
} // namespace gate

enum class Gateset { Abstract, IbmNative, GenericNative };

inline constexpr std::string_view gateset_name(Gateset g) {
    switch (g) {
    case Gateset::Abstract:
        return "abstract";
    case Gateset::IbmNative:
        return "ibm";
    case Gateset::GenericNative:
        return "generic";
    }
    return "?";
}

inline Gateset parse_gateset(std::string_view s) {
    if (s == "abstract") {
        return Gateset::Abstract;
    }
    if (s == "ibm") {
        return Gateset::IbmNative;
    }
    if (s == "generic") {
        return Gateset::GenericNative;
    }
    throw Error("unknown gateset '" + std::string(s) +
                "' (expected abstract, ibm or generic)");
}

/// Measure is admitted by every gateset.
inline constexpr bool in_gateset(GateKind k, Gateset g) {
    if (k == GateKind::Measure || g == Gateset::Abstract) {
        return true;
    }
    if (g == Gateset::IbmNative) {
        return k == GateKind::X || k == GateKind::SqrtX || k == GateKind::Rz ||
               k == GateKind::CNOT;
    }
    return k == GateKind::H || k == GateKind::S || k == GateKind::Sdg ||
           k == GateKind::T || k == GateKind::Tdg || k == GateKind::Rz ||
           k == GateKind::CNOT;
}

inline void check_gate(const Gate &g, std::size_t n) {
    const auto arity = gate_arity(g.kind);
    const auto name = std::string(gate_name(g.kind));
    if (arity == 0) {
        require(!g.qubits.empty(), name + " needs at least one operand");
    } else {
        require(g.qubits.size() == arity,
                name + " expects " + std::to_string(arity) + " operand(s)");
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
        require(g.qubits[i] < n, name + " operand q" +
                                     std::to_string(g.qubits[i]) +
                                     " out of range for " + std::to_string(n) +
                                     " qubits");
        for (std::size_t j = 0; j < i; ++j) {
            require(g.qubits[i] != g.qubits[j],
                    name + " operands must be distinct");
        }
    }
    require(std::isfinite(g.param), name + " parameter must be finite");
}

class Circuit {
  public:
    explicit Circuit(std::size_t n, Gateset gateset = Gateset::Abstract)
        : n_(n), gateset_(gateset), out_permutation_(n) {
        require(n_ >= 1, "circuit needs at least one qubit");
        std::iota(out_permutation_.begin(), out_permutation_.end(),
                  std::size_t{0});
    }

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] Gateset gateset() const { return gateset_; }
    void set_gateset(Gateset g) { gateset_ = g; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }

    /// Where the content of qubit q ends up when the circuit finishes.
    [[nodiscard]] const std::vector<std::size_t> &out_permutation() const {
        return out_permutation_;
    }

    void set_out_permutation(std::vector<std::size_t> perm) {
        require(perm.size() == n_, "out permutation has wrong length");
        std::vector<bool> hit(n_, false);
        for (auto p : perm) {
            require(p < n_ && !hit[p], "out permutation is not a bijection");
            hit[p] = true;
        }
        out_permutation_ = std::move(perm);
    }

    Circuit &append(Gate g) {
        check_gate(g, n_);
        gates_.push_back(std::move(g));
        return *this;
    }

    /// Append the gates of `other` (its permutation is ignored).
    Circuit &append(const Circuit &other) {
        require(other.n() == n_, "cannot append circuits of different width");
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    [[nodiscard]] bool has_measure() const {
        return std::any_of(gates_.begin(), gates_.end(), [](const Gate &g) {
            return g.kind == GateKind::Measure;
        });
    }

    [[nodiscard]] std::size_t count(GateKind k) const {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(),
                          [k](const Gate &g) { return g.kind == k; }));
    }

    /// Number of gates acting on two or more qubits.
    [[nodiscard]] std::size_t multi_qubit_count() const {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(),
                          [](const Gate &g) { return g.qubits.size() >= 2; }));
    }

    /// Circuit without its Measure gates.
    [[nodiscard]] Circuit without_measurements() const {
        Circuit c(n_, gateset_);
        c.out_permutation_ = out_permutation_;
        for (const auto &g : gates_) {
            if (g.kind != GateKind::Measure) {
                c.gates_.push_back(g);
            }
        }
        return c;
    }

    bool operator==(const Circuit &) const = default;

  private:
    std::size_t n_;
    Gateset gateset_;
    std::vector<Gate> gates_;
    std::vector<std::size_t> out_permutation_;
};

/// Inverse of one gate, as a short gate sequence in application order.
inline std::vector<Gate> inverse_gates(const Gate &g) {
    switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::Swap:
        return {g};
    case GateKind::SqrtX:
        // SX^dagger = X . SX
        return {gate::sqrt_x(g.qubits[0]), gate::x(g.qubits[0])};
    case GateKind::S:
        return {gate::sdg(g.qubits[0])};
    case GateKind::Sdg:
        return {gate::s(g.qubits[0])};
    case GateKind::T:
        return {gate::tdg(g.qubits[0])};
    case GateKind::Tdg:
        return {gate::t(g.qubits[0])};
    case GateKind::Rz:
    case GateKind::Phase:
    case GateKind::ControlledPhase:
    case GateKind::MultiControlledPhase:
        return {Gate{g.kind, g.qubits, -g.param}};
    case GateKind::Measure:
        break;
    }
    throw Error("cannot invert a measurement");
}

inline Circuit dagger(const Circuit &c) {
    require(!c.has_measure(), "dagger: circuit contains measurements");
    Circuit out(c.n(), c.gateset());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        for (auto &g : inverse_gates(*it)) {
            out.append(std::move(g));
        }
    }
    std::vector<std::size_t> inverse(c.n());
    for (std::size_t q = 0; q < c.n(); ++q) {
        inverse[c.out_permutation()[q]] = q;
    }
    out.set_out_permutation(std::move(inverse));
    return out;
}

struct Violation {
    std::size_t gate_index;
    std::string message;
};

/**
 * Structural problems of `c`: gates outside its gateset and, when a
 * topology is given, multi-qubit gates whose operand pairs are not all
 * topology edges. An empty result means the circuit is valid.
 */
inline std::vector<Violation> validate(const Circuit &c,
                                       const Topology *topology = nullptr) {
    std::vector<Violation> out;
    if (topology != nullptr && c.n() > topology->size()) {
        out.push_back({0, "circuit has " + std::to_string(c.n()) +
                              " qubits but topology '" + topology->name() +
                              "' only " + std::to_string(topology->size())});
        return out;
    }
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
        const auto &g = c.gates()[i];
        if (!in_gateset(g.kind, c.gateset())) {
            out.push_back({i, std::string(gate_name(g.kind)) +
                                  " is not in gateset " +
                                  std::string(gateset_name(c.gateset()))});
        }
        if (topology == nullptr || g.qubits.size() < 2) {
            continue;
        }
        for (std::size_t a = 0; a < g.qubits.size(); ++a) {
            for (std::size_t b = a + 1; b < g.qubits.size(); ++b) {
                if (!topology->has_edge(g.qubits[a], g.qubits[b])) {
                    out.push_back(
                        {i, std::string(gate_name(g.kind)) + " on q" +
                                std::to_string(g.qubits[a]) + ",q" +
                                std::to_string(g.qubits[b]) +
                                " is not a topology edge"});
                }
            }
        }
    }
    return out;
}

// Text format, one statement per line:
//   QUBITS <n>
//   GATESET abstract|ibm|generic
//   <NAME>[(<param>)] q<i> [q<j> ...]
//   PERMUTATION <p0> <p1> ...
// '#' starts a comment.

inline void write_circuit(std::ostream &os, const Circuit &c) {
    const auto old_precision = os.precision();
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "QUBITS " << c.n() << "\n";
    os << "GATESET " << gateset_name(c.gateset()) << "\n";
    for (const auto &g : c.gates()) {
        os << gate_name(g.kind);
        if (has_parameter(g.kind)) {
            os << "(" << g.param << ")";
        }
        for (auto q : g.qubits) {
            os << " q" << q;
        }
        os << "\n";
    }
    os << "PERMUTATION";
    for (auto p : c.out_permutation()) {
        os << " " << p;
    }
    os << "\n";
    os.precision(old_precision);
}

inline std::string to_text(const Circuit &c) {
    std::ostringstream os;
    write_circuit(os, c);
    return os.str();
}

namespace detail {

inline GateKind gate_kind_from_name(const std::string &name) {
    static constexpr GateKind kinds[] = {
        GateKind::H,
        GateKind::X,
        GateKind::SqrtX,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rz,
        GateKind::Phase,
        GateKind::CNOT,
        GateKind::ControlledPhase,
        GateKind::Toffoli,
        GateKind::MultiControlledPhase,
        GateKind::Swap,
        GateKind::Measure,
    };
    for (auto k : kinds) {
        if (name == gate_name(k)) {
            return k;
        }
    }
    if (name == "CX") {
        return GateKind::CNOT;
    }
    if (name == "SQRTX") {
        return GateKind::SqrtX;
    }
    if (name == "TOFFOLI") {
        return GateKind::Toffoli;
    }
    throw Error("unknown gate '" + name + "'");
}

inline std::size_t parse_index(const std::string &tok, std::size_t line) {
    std::size_t v = 0;
    const char *first = tok.data();
    const char *last = tok.data() + tok.size();
    if (first != last && *first == 'q') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    require(ec == std::errc() && ptr == last && first != last,
            "line " + std::to_string(line) + ": bad qubit '" + tok + "'");
    return v;
}

} // namespace detail

inline Circuit read_circuit(std::istream &is) {
    struct Pending {
        Gate gate;
        std::size_t line;
    };
    std::vector<Pending> pending;
    std::size_t n = 0;
    bool have_n = false;
    Gateset gateset = Gateset::Abstract;
    std::vector<std::size_t> permutation;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream ls(raw);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        std::string upper = head;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char ch) { return std::toupper(ch); });
        if (upper == "QUBITS") {
            std::string tok;
            require(static_cast<bool>(ls >> tok),
                    "line " + std::to_string(line_no) + ": QUBITS needs n");
            n = detail::parse_index(tok, line_no);
            have_n = true;
            continue;
        }
        if (upper == "GATESET") {
            std::string tok;
            require(static_cast<bool>(ls >> tok),
                    "line " + std::to_string(line_no) + ": GATESET needs name");
            gateset = parse_gateset(tok);
            continue;
        }
        if (upper == "PERMUTATION") {
            permutation.clear();
            std::string tok;
            while (ls >> tok) {
                permutation.push_back(detail::parse_index(tok, line_no));
            }
            continue;
        }
        Gate g{GateKind::H, {}, 0.0};
        std::string name = upper;
        if (auto open = upper.find('('); open != std::string::npos) {
            const auto close = head.find(')', open);
            require(close != std::string::npos,
                    "line " + std::to_string(line_no) + ": missing ')'");
            name = upper.substr(0, open);
            const std::string arg = head.substr(open + 1, close - open - 1);
            try {
                std::size_t used = 0;
                g.param = std::stod(arg, &used);
                require(used == arg.size(), "trailing characters");
            } catch (const std::exception &) {
                throw Error("line " + std::to_string(line_no) +
                            ": bad parameter '" + arg + "'");
            }
        }
        g.kind = detail::gate_kind_from_name(name);
        require(!has_parameter(g.kind) || name != upper,
                "line " + std::to_string(line_no) + ": " + name +
                    " needs a parameter");
        std::string tok;
        while (ls >> tok) {
            g.qubits.push_back(detail::parse_index(tok, line_no));
        }
        pending.push_back({std::move(g), line_no});
    }
    if (!have_n) {
        for (const auto &p : pending) {
            for (auto q : p.gate.qubits) {
                n = std::max(n, q + 1);
            }
        }
        n = std::max<std::size_t>(n, permutation.size());
    }
    Circuit c(n, gateset);
    for (auto &p : pending) {
        try {
            c.append(std::move(p.gate));
        } catch (const Error &e) {
            throw Error("line " + std::to_string(p.line) + ": " + e.what());
        }
    }
    if (!permutation.empty()) {
        c.set_out_permutation(std::move(permutation));
    }
    return c;
}

inline Circuit from_text(const std::string &text) {
    std::istringstream is(text);
    return read_circuit(is);
}

} // namespace fairsamp
