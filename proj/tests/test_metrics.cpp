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

#include <fairsamp/gmqaoa.hpp>
#include <fairsamp/metrics.hpp>

#include <gtest/gtest.h>

#include <array>

using namespace fairsamp;

namespace {

std::vector<std::uint64_t> family(double delta) {
    const double total = 3e6;
    return {static_cast<std::uint64_t>(std::llround((1.0 / 3 + delta) * total)),
            static_cast<std::uint64_t>(std::llround((1.0 / 3 - delta) * total)),
            1000000};
}

FairnessConfig loops(std::size_t n) {
    FairnessConfig c;
    c.inner_loops = n;
    return c;
}

} // namespace

TEST(AggregateError, TwoGates) {
    const std::array<double, 2> r = {0.01, 0.02};
    EXPECT_EQ(aggregate_error(r), 0.0298);
}

TEST(AggregateError, Boundaries) {
    EXPECT_EQ(aggregate_error(std::span<const double>{}), 0.0);
    const std::array<double, 3> zeros = {0, 0, 0};
    EXPECT_EQ(aggregate_error(zeros), 0.0);
    const std::array<double, 3> one = {0.1, 1.0, 0.2};
    EXPECT_EQ(aggregate_error(one), 1.0);
    const std::array<double, 1> bad = {1.5};
    EXPECT_THROW(aggregate_error(bad), Error);
    std::vector<double> many(1000, 1e-3);
    EXPECT_NEAR(aggregate_error(many), 1 - std::pow(1 - 1e-3, 1000), 1e-12);
}

TEST(Chi2, MatchesClosedFormForTwoDegrees) {
    EXPECT_NEAR(chi2_critical(2, 0.05), oracle::chi2_df2_critical_5pct(), 1e-10);
    for (double x : {0.1, 1.0, 3.0, 7.5}) {
        EXPECT_NEAR(chi2_pvalue(x, 2), std::exp(-x / 2), 1e-13);
    }
    EXPECT_NEAR(chi2_critical(1, 0.05), 3.841458820694124, 1e-9);
    EXPECT_NEAR(chi2_critical(5, 0.05), 11.070497693516351, 1e-9);
    const std::array<std::uint64_t, 3> c = {10, 10, 10};
    EXPECT_EQ(chi2_uniform(c), 0.0);
    const std::array<std::uint64_t, 2> d = {3, 1};
    EXPECT_DOUBLE_EQ(chi2_uniform(d), 1.0);
}

TEST(Fairness, AllInOneBucketNeedsThreeShots) {
    EXPECT_EQ(fairness_nstr({1000, 0, 0}, FairnessConfig{}, 1), (FairnessResult{false, 3}));
    EXPECT_EQ(fairness_nstr({0, 5, 0}, loops(10), 1).shots, 3U);
}

TEST(Fairness, UniformReachesCap) {
    auto cfg = loops(200);
    cfg.cap = 100000;
    const auto r = fairness_nstr({50, 50, 50}, cfg, 4);
    EXPECT_TRUE(r.cap_reached);
    EXPECT_EQ(r.shots, 100000U);
    EXPECT_EQ(r.to_string(), ">100000");
}

TEST(Fairness, MonotoneInBias) {
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (double delta : {0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        const auto r = fairness_nstr(family(delta), loops(1000), 99);
        ASSERT_FALSE(r.cap_reached) << delta;
        EXPECT_LE(r.shots, prev) << delta;
        prev = r.shots;
    }
}

TEST(Fairness, ScaleInvariant) {
    const auto a = fairness_nstr({30, 20, 10}, loops(500), 7);
    const auto b = fairness_nstr({300, 200, 100}, loops(500), 7);
    EXPECT_EQ(a, b);
}

TEST(Fairness, DeterministicForSeed) {
    const std::vector<std::uint64_t> c = {40, 35, 25, 20};
    EXPECT_EQ(fairness_nstr(c, loops(300), 5), fairness_nstr(c, loops(300), 5));
}

TEST(Fairness, ResultIsThreshold) {
    const std::vector<std::uint64_t> c = {60, 25, 15};
    const auto cfg = loops(400);
    const auto r = fairness_nstr(c, cfg, 12);
    const std::vector<double> p = {0.6, 0.25, 0.15};
    EXPECT_GE(fairness_rejection_rate(p, r.shots, cfg, 12), cfg.rejection_fraction);
    EXPECT_LT(fairness_rejection_rate(p, r.shots - 1, cfg, 12), cfg.rejection_fraction);
}

TEST(Fairness, Errors) {
    EXPECT_THROW(fairness_nstr({5}, FairnessConfig{}, 0), Error);
    EXPECT_THROW(fairness_nstr({0, 0}, FairnessConfig{}, 0), Error);
    FairnessConfig bad;
    bad.significance = 1.0;
    EXPECT_THROW(fairness_nstr({1, 2}, bad, 0), Error);
}

TEST(Gsp, SeparateAndCombinedCounts) {
    const auto m = builtin_problem(ProblemId::E);
    auto g = enumerate_ground_states(m);
    SampleCounts c{3, 100, {{parse_bitstring("uud", 3), 30},
                            {parse_bitstring("ddu", 3), 10},
                            {parse_bitstring("udu", 3), 20},
                            {parse_bitstring("uuu", 3), 40}}};
    EXPECT_DOUBLE_EQ(gsp(c, g), 0.6);
    const auto sep = ground_counts(c, g);
    EXPECT_EQ(sep.size(), 6U);
    std::uint64_t sum = 0;
    for (auto v : sep) {
        sum += v;
    }
    EXPECT_EQ(sum, 60U);
    g.complement_mode = ComplementMode::Combined;
    EXPECT_DOUBLE_EQ(gsp(c, g), 0.6);
    const auto comb = ground_counts(c, g);
    ASSERT_EQ(comb.size(), 3U);
    EXPECT_EQ(comb[0] + comb[1] + comb[2], 60U);
    EXPECT_NE(std::find(comb.begin(), comb.end(), 40U), comb.end());
}

TEST(Calibration, JsonLookupAndDefaults) {
    const auto c = calibration_from_json(nlohmann::json::parse(R"({
        "single_qubit": [{"gate": "SX", "qubit": 0, "error": 0.001},
                         {"gate": "rz", "qubit": 0, "error": 0}],
        "two_qubit": [{"gate": "CNOT", "qubits": [1, 0], "error": 0.01}],
        "readout": [{"qubit": 0, "error": 0.02}],
        "defaults": {"single": 0.0005}
    })"));
    EXPECT_EQ(c.gate_error(gate::sqrt_x(0)), 0.001);
    EXPECT_EQ(c.gate_error(gate::cnot(0, 1)), 0.01);
    EXPECT_EQ(c.gate_error(gate::x(3)), 0.0005);
    EXPECT_EQ(c.readout_error(0), 0.02);
    EXPECT_THROW((void)c.readout_error(1), Error);
    EXPECT_THROW((void)c.gate_error(gate::cnot(1, 2)), Error);

    Circuit k(2, Gateset::IbmNative);
    k.append(gate::sqrt_x(0)).append(gate::cnot(1, 0)).append(gate::measure(0));
    EXPECT_NEAR(aggregate_error(k, c), 1 - 0.999 * 0.99 * 0.98, 1e-15);
    EXPECT_NEAR(aggregate_error(k, c, false), 1 - 0.999 * 0.99, 1e-15);
}

TEST(Calibration, RejectsBadInput) {
    EXPECT_THROW(calibration_from_json(nlohmann::json::parse(
                     R"({"readout": [{"qubit": 0, "error": 2}]})")),
                 Error);
    EXPECT_THROW(calibration_from_json(nlohmann::json::parse(
                     R"({"two_qubit": [{"gate": "cx", "qubits": [0], "error": 0.1}]})")),
                 Error);
    EXPECT_THROW(calibration_from_json(nlohmann::json::parse("[]")), Error);
}
