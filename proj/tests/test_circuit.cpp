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

#include "oracles.hpp"

#include <fairsamp/circuit.hpp>
#include <fairsamp/statevector.hpp>
#include <fairsamp/unitary.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace fairsamp;

namespace {

Circuit random_circuit(std::size_t n, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-pi, pi);
    Circuit c(n);
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t a = rng() % n;
        const std::size_t b = (a + 1 + rng() % (n - 1)) % n;
        switch (rng() % 9) {
        case 0: c.append(gate::h(a)); break;
        case 1: c.append(gate::x(a)); break;
        case 2: c.append(gate::sqrt_x(a)); break;
        case 3: c.append(gate::t(a)); break;
        case 4: c.append(gate::rz(a, ang(rng))); break;
        case 5: c.append(gate::cnot(a, b)); break;
        case 6: c.append(gate::cphase(a, b, ang(rng))); break;
        case 7: c.append(gate::swap(a, b)); break;
        default: c.append(gate::phase(a, ang(rng))); break;
        }
    }
    return c;
}

} // namespace

TEST(Gates, ArityAndParameters) {
    EXPECT_THROW(Circuit(0), Error);
    Circuit c(3);
    EXPECT_THROW(c.append(gate::cnot(0, 0)), Error);
    EXPECT_THROW(c.append(gate::h(3)), Error);
    EXPECT_THROW(c.append({GateKind::CNOT, {0}}), Error);
    EXPECT_THROW(c.append(gate::mcphase({}, 0.1)), Error);
    EXPECT_NO_THROW(c.append(gate::mcphase({0}, 0.1)));
    EXPECT_THROW(c.append(gate::rz(0, std::nan(""))), Error);
    EXPECT_NO_THROW(c.append(gate::mcphase({0, 1, 2}, 0.1)));
    EXPECT_TRUE(has_parameter(GateKind::MultiControlledPhase));
    EXPECT_FALSE(has_parameter(GateKind::Swap));
}

TEST(Gates, HadamardMatrix) {
    Circuit c(1);
    c.append(gate::h(0));
    const auto u = unitary_of(c);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(u(0, 0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) + r), 0.0, 1e-15);
}

TEST(Gates, EmptyCircuitIsIdentity) {
    EXPECT_LT(unitary_of(Circuit(3)).max_abs_diff(Matrix::identity(8)), 1e-15);
}

TEST(Gates, CnotRzCnotIsZZRotation) {
    const double theta = 0.731;
    Circuit c(2);
    c.append(gate::cnot(0, 1)).append(gate::rz(1, theta)).append(gate::cnot(0, 1));
    const auto u = unitary_of(c);
    for (Basis x = 0; x < 4; ++x) {
        const int parity = (bit_of(x, 0) ^ bit_of(x, 1)) ? -1 : 1;
        EXPECT_NEAR(std::abs(u(x, x) - std::polar(1.0, -theta / 2 * parity)), 0.0,
                    1e-14);
    }
}

TEST(Gates, SingleQubitMatricesMatchOracle) {
    const oracle::cplx i{0, 1};
    const double r = 1.0 / std::sqrt(2.0);
    struct Case {
        Gate g;
        std::array<oracle::cplx, 4> m;
    };
    const std::vector<Case> cases = {
        {gate::h(1), {r, r, r, -r}},
        {gate::x(1), {0, 1, 1, 0}},
        {gate::sqrt_x(1), {(1.0 + i) / 2.0, (1.0 - i) / 2.0, (1.0 - i) / 2.0, (1.0 + i) / 2.0}},
        {gate::s(1), {1, 0, 0, i}},
        {gate::sdg(1), {1, 0, 0, -i}},
        {gate::t(1), {1, 0, 0, std::polar(1.0, pi / 4)}},
        {gate::tdg(1), {1, 0, 0, std::polar(1.0, -pi / 4)}},
        {gate::rz(1, 0.4), {std::polar(1.0, -0.2), 0, 0, std::polar(1.0, 0.2)}},
        {gate::phase(1, 0.3), {1, 0, 0, std::polar(1.0, 0.3 * pi)}},
    };
    for (const auto &cs : cases) {
        Circuit c(3);
        c.append(cs.g);
        const auto u = unitary_of(c);
        const auto o = oracle::single(3, 1, cs.m);
        double d = 0;
        for (std::size_t a = 0; a < 8; ++a) {
            for (std::size_t b = 0; b < 8; ++b) {
                d = std::max(d, std::abs(u(a, b) - o[a][b]));
            }
        }
        EXPECT_LT(d, 1e-14) << gate_name(cs.g.kind);
    }
}

TEST(Gates, McpIsSymmetricAndPhasesAllOnes) {
    const double t = 0.37;
    Circuit a(4);
    a.append(gate::mcphase({0, 2, 3}, t));
    Circuit b(4);
    b.append(gate::mcphase({3, 0, 2}, t));
    EXPECT_LT(unitary_of(a).max_abs_diff(unitary_of(b)), 1e-15);
    const auto u = unitary_of(a);
    for (Basis x = 0; x < 16; ++x) {
        const bool all = bit_of(x, 0) && bit_of(x, 2) && bit_of(x, 3);
        EXPECT_NEAR(std::abs(u(x, x) - (all ? std::polar(1.0, t * pi) : 1.0)), 0.0,
                    1e-15);
    }
}

TEST(Gates, ToffoliAndSwap) {
    Circuit c(3);
    c.append(gate::toffoli(0, 1, 2));
    for (Basis x = 0; x < 8; ++x) {
        const auto s = simulate(c, Statevector::basis_state(3, x));
        const Basis y = (bit_of(x, 0) && bit_of(x, 1)) ? x ^ 4 : x;
        EXPECT_NEAR(std::norm(s[y]), 1.0, 1e-15);
    }
    Circuit w(2);
    w.append(gate::swap(0, 1));
    EXPECT_NEAR(std::norm(simulate(w, Statevector::basis_state(2, 1))[2]), 1.0,
                1e-15);
}

TEST(Circuit, UnitaryOfCompositionIsProduct) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto a = random_circuit(3, 15, s);
        const auto b = random_circuit(3, 15, s + 100);
        Circuit ab = a;
        ab.append(b);
        EXPECT_LT(unitary_of(ab).max_abs_diff(unitary_of(b) * unitary_of(a)),
                  1e-12);
        EXPECT_LT(unitarity_error(unitary_of(ab)), 1e-12);
    }
}

TEST(Circuit, DaggerInverts) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto c = random_circuit(4, 30, s);
        c.append(gate::toffoli(0, 1, 2)).append(gate::mcphase({0, 1, 3}, 0.2));
        c.append(gate::sdg(1)).append(gate::tdg(2));
        Circuit cc = c;
        cc.append(dagger(c));
        EXPECT_TRUE(equal_up_to_phase(unitary_of(cc), Matrix::identity(16), 1e-12));
    }
    Circuit m(1);
    m.append(gate::measure(0));
    EXPECT_THROW(dagger(m), Error);
}

TEST(Circuit, DaggerStatevectorRoundTrip) {
    const auto c = random_circuit(5, 60, 9);
    const auto psi = simulate(c);
    const auto back = simulate(dagger(c), psi);
    EXPECT_NEAR(std::norm(back[0]), 1.0, 1e-12);
}

TEST(Circuit, ValidateReportsGatesetAndEdges) {
    Circuit ok(3, Gateset::IbmNative);
    ok.append(gate::rz(0, 0.1)).append(gate::sqrt_x(1)).append(gate::cnot(0, 1));
    ok.append(gate::measure(2));
    const Topology line("line", 3, {{0, 1}, {1, 2}});
    EXPECT_TRUE(validate(ok, &line).empty());

    Circuit bad(3, Gateset::IbmNative);
    bad.append(gate::h(0)).append(gate::cnot(0, 2));
    const auto v = validate(bad, &line);
    ASSERT_EQ(v.size(), 2U);
    EXPECT_EQ(v[0].gate_index, 0U);
    EXPECT_EQ(v[1].gate_index, 1U);
    EXPECT_EQ(validate(bad, nullptr).size(), 1U);

    Circuit generic(2, Gateset::GenericNative);
    generic.append(gate::h(0)).append(gate::t(1)).append(gate::rz(0, 1));
    generic.append(gate::x(0));
    EXPECT_EQ(validate(generic, nullptr).size(), 1U);
}

TEST(Circuit, TextRoundTrip) {
    auto c = random_circuit(4, 40, 3);
    c.append(gate::mcphase({0, 1, 2, 3}, -0.123456789012345));
    c.append(gate::toffoli(2, 0, 1));
    for (std::size_t q = 0; q < 4; ++q) {
        c.append(gate::measure(q));
    }
    c.set_out_permutation({1, 0, 3, 2});
    EXPECT_EQ(from_text(to_text(c)), c);
    EXPECT_THROW(from_text("QUBITS 2\nFOO 0\n"), Error);
    EXPECT_THROW(from_text("QUBITS 2\nCNOT 0\n"), Error);
    EXPECT_EQ(from_text("H 0\nCNOT 0 2\n").n(), 3U);
    EXPECT_THROW(from_text("QUBITS 2\nRZ 0\n"), Error);
    EXPECT_THROW(from_text("QUBITS 2\nGATESET bogus\n"), Error);
}

TEST(Circuit, InGateset) {
    EXPECT_TRUE(in_gateset(GateKind::MultiControlledPhase, Gateset::Abstract));
    EXPECT_FALSE(in_gateset(GateKind::H, Gateset::IbmNative));
    EXPECT_TRUE(in_gateset(GateKind::SqrtX, Gateset::IbmNative));
    EXPECT_TRUE(in_gateset(GateKind::T, Gateset::GenericNative));
    EXPECT_FALSE(in_gateset(GateKind::SqrtX, Gateset::GenericNative));
    EXPECT_EQ(parse_gateset("ibm"), Gateset::IbmNative);
    EXPECT_EQ(parse_gateset("generic"), Gateset::GenericNative);
    EXPECT_THROW(parse_gateset("nope"), Error);
}

TEST(Statevector, BellState) {
    Circuit c(2);
    c.append(gate::h(0)).append(gate::cnot(0, 1));
    const auto s = simulate(c);
    EXPECT_NEAR(std::norm(s[0]), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(s[3]), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(s[1]) + std::norm(s[2]), 0.0, 1e-15);
}

TEST(Statevector, UniformFromHadamards) {
    Circuit c(4);
    for (std::size_t q = 0; q < 4; ++q) {
        c.append(gate::h(q));
    }
    EXPECT_NEAR(overlap(simulate(c), Statevector::uniform(4)), 1.0, 1e-12);
}

TEST(Statevector, MatchesUnitaryColumns) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto c = random_circuit(4, 40, s);
        const auto u = unitary_of(c);
        for (Basis x = 0; x < 16; x += 5) {
            const auto v = simulate(c, Statevector::basis_state(4, x));
            for (Basis y = 0; y < 16; ++y) {
                EXPECT_LT(std::abs(v[y] - u(y, x)), 1e-12);
            }
        }
        EXPECT_NEAR(simulate(c).norm(), 1.0, 1e-12);
    }
}

TEST(Statevector, MeasureIsIgnoredBySimulation) {
    Circuit c(2);
    c.append(gate::h(0)).append(gate::measure(0)).append(gate::measure(1));
    EXPECT_NEAR(std::norm(simulate(c)[1]), 0.5, 1e-15);
}

TEST(Statevector, Limits) {
    EXPECT_THROW(Statevector(0), Error);
    EXPECT_THROW(Statevector(25), Error);
    EXPECT_THROW(Statevector::basis_state(2, 4), Error);
}

TEST(Sampling, DeterministicAndCalibrated) {
    Circuit c(2);
    c.append(gate::h(0)).append(gate::cnot(0, 1));
    const auto s = simulate(c);
    const auto a = sample(s, 10000, 7);
    const auto b = sample(s, 10000, 7);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, sample(s, 10000, 8));
    EXPECT_EQ(a.count(0) + a.count(3), 10000U);
    // five standard deviations of Binomial(10000, 1/2)
    EXPECT_NEAR(static_cast<double>(a.count(0)), 5000.0, 5 * 50.0);
}

TEST(Sampling, ZeroProbabilityNeverDrawn) {
    const auto c = sample_probabilities({0.0, 1.0, 0.0, 0.0}, 2, 1000, 3);
    EXPECT_EQ(c.count(1), 1000U);
    EXPECT_EQ(c.counts.size(), 1U);
}

TEST(Sampling, MultinomialMarginals) {
    const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    const std::uint64_t shots = 200000;
    const auto c = sample_probabilities(p, 2, shots, 11);
    for (Basis x = 0; x < 4; ++x) {
        const double mean = p[x] * shots;
        const double sd = std::sqrt(shots * p[x] * (1 - p[x]));
        EXPECT_NEAR(static_cast<double>(c.count(x)), mean, 5 * sd);
    }
}

TEST(Sampling, ExpectationEnergy) {
    const auto m = builtin_problem(ProblemId::E);
    const auto uni = Statevector::uniform(3);
    EXPECT_NEAR(expectation_energy(uni, m), 0.0, 1e-14);
    EXPECT_NEAR(expectation_energy(Statevector::basis_state(3, 0), m), 3.0, 1e-14);
}

TEST(Sampling, CountsIo) {
    const auto c = sample_probabilities({0.25, 0.25, 0.5, 0.0}, 2, 64, 5);
    EXPECT_EQ(counts_from_json(to_json(c)), c);
    std::ostringstream os;
    write_counts_csv(os, c);
    EXPECT_EQ(os.str().rfind("bitstring,count\n", 0), 0U);
}
