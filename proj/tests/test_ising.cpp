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

#include <fairsamp/ising.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace fairsamp;

TEST(IsingModel, RejectsBadTerms) {
    EXPECT_THROW(IsingModel(0, {}), Error);
    EXPECT_THROW(IsingModel(3, {{1, 0, 1.0}}), Error);
    EXPECT_THROW(IsingModel(3, {{0, 1, 1.0}, {0, 1, 2.0}}), Error);
    EXPECT_THROW(IsingModel(3, {{0, 3, 1.0}}), Error);
    EXPECT_THROW(IsingModel(3, {}, {{3, 1.0}}), Error);
    EXPECT_THROW(IsingModel(3, {}, {{1, 1.0}, {1, 2.0}}), Error);
    EXPECT_NO_THROW(IsingModel(1, {}));
}

TEST(IsingModel, HandEvaluatedEnergies) {
    const auto e = builtin_problem(ProblemId::E);
    EXPECT_DOUBLE_EQ(e.energy("uuu"), 3.0);
    EXPECT_DOUBLE_EQ(e.energy("uud"), -1.0);
    EXPECT_DOUBLE_EQ(e.energy("001"), -1.0);
    EXPECT_DOUBLE_EQ(builtin_problem(ProblemId::A).energy("uuuuu"), -4.0);
    EXPECT_THROW((void)e.energy("uu"), Error);
    EXPECT_THROW((void)e.energy("uux"), Error);
}

TEST(IsingModel, BuiltinShapes) {
    const std::size_t sizes[] = {5, 5, 6, 4, 3};
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        EXPECT_EQ(m.n(), sizes[static_cast<int>(id)]);
        EXPECT_TRUE(m.linear().empty());
    }
    const auto a = builtin_problem(ProblemId::A);
    EXPECT_EQ(a.quadratic().size(), 8U);
    EXPECT_NE(std::find(a.quadratic().begin(), a.quadratic().end(),
                        Coupling{0, 3, -1.0}),
              a.quadratic().end());
    const auto e = builtin_problem(ProblemId::E);
    EXPECT_EQ(e.quadratic(),
              (std::vector<Coupling>{{0, 1, -1}, {0, 2, -1}, {1, 2, -1}}));
}

TEST(IsingModel, EnergyMatchesSpinOracle) {
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        for (Basis x = 0; x < (Basis{1} << m.n()); ++x) {
            EXPECT_DOUBLE_EQ(m.energy(x), oracle::energy(m, oracle::spins(x, m.n())));
        }
    }
}

TEST(IsingModel, ComplementSymmetry) {
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        for (Basis x = 0; x < (Basis{1} << m.n()); ++x) {
            EXPECT_DOUBLE_EQ(m.energy(x), m.energy(complement(x, m.n())));
        }
    }
}

TEST(IsingModel, ScalingScalesEnergies) {
    const auto m = builtin_problem(ProblemId::B);
    const auto s = m.scaled(-2.5);
    for (Basis x = 0; x < 32; ++x) {
        EXPECT_DOUBLE_EQ(s.energy(x), -2.5 * m.energy(x));
    }
    const auto pos = m.scaled(3.0);
    EXPECT_EQ(enumerate_ground_states(pos).states,
              enumerate_ground_states(m).states);
}

TEST(GroundStates, MatchListedStatesAndComplements) {
    for (const auto &ref : oracle::references()) {
        const auto g = enumerate_ground_states(builtin_problem(ref.id));
        std::set<std::string> expected;
        for (const auto &s : ref.listed_ground_states) {
            expected.insert(s);
            expected.insert(oracle::flip(s));
        }
        std::set<std::string> got;
        for (auto x : g.states) {
            got.insert(oracle::to_ud(x, ref.n));
        }
        EXPECT_EQ(got, expected) << problem_letter(ref.id);
        EXPECT_DOUBLE_EQ(g.energy, ref.full_ground_energy);
        EXPECT_TRUE(std::is_sorted(g.states.begin(), g.states.end()));
        EXPECT_TRUE(g.has_complements());
    }
}

TEST(GroundStates, Counts) {
    EXPECT_EQ(enumerate_ground_states(builtin_problem(ProblemId::B)).states.size(), 12U);
    EXPECT_EQ(enumerate_ground_states(builtin_problem(ProblemId::D)).states.size(), 6U);
    EXPECT_EQ(enumerate_ground_states(builtin_problem(ProblemId::E)).states.size(), 6U);
    EXPECT_DOUBLE_EQ(enumerate_ground_states(builtin_problem(ProblemId::D)).energy, -2.0);
}

TEST(GroundStates, Combined) {
    auto g = enumerate_ground_states(builtin_problem(ProblemId::E),
                                     ComplementMode::Combined);
    EXPECT_TRUE(g.contains(parse_bitstring("uud", 3)));
    EXPECT_TRUE(g.contains(parse_bitstring("ddu", 3)));
    EXPECT_FALSE(g.contains(parse_bitstring("uuu", 3)));
}

TEST(GroundStates, CombinedNeedsClosedSet) {
    EXPECT_THROW(enumerate_ground_states(reduced_problem(ProblemId::D),
                                         ComplementMode::Combined),
                 Error);
}

TEST(GroundStates, TooLarge) {
    EXPECT_THROW(enumerate_ground_states(IsingModel(25, {})), Error);
}

TEST(FixSpin, ProblemE) {
    const auto f = fix_spin(builtin_problem(ProblemId::E), 0, Spin::Up);
    EXPECT_EQ(f.model.n(), 2U);
    EXPECT_EQ(f.model.quadratic(), (std::vector<Coupling>{{0, 1, -1}}));
    EXPECT_EQ(f.model.linear(), (std::vector<Field>{{0, -1}, {1, -1}}));
    EXPECT_DOUBLE_EQ(f.offset, 0.0);
    const auto g = enumerate_ground_states(f.model);
    std::set<std::string> got;
    for (auto x : g.states) {
        got.insert(oracle::to_ud(x, 2));
    }
    EXPECT_EQ(got, (std::set<std::string>{"ud", "du", "dd"}));
}

TEST(FixSpin, ProblemDHasThreeStates) {
    EXPECT_EQ(enumerate_ground_states(reduced_problem(ProblemId::D)).states.size(), 3U);
}

TEST(FixSpin, GroundSetIsRestriction) {
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        const auto full = enumerate_ground_states(m);
        const auto red = enumerate_ground_states(reduced_problem(id));
        std::vector<Basis> expected;
        for (auto x : full.states) {
            if (!bit_of(x, 0)) {
                expected.push_back(x >> 1);
            }
        }
        EXPECT_EQ(red.states, expected);
        EXPECT_DOUBLE_EQ(red.energy, full.energy);
    }
}

TEST(FixSpin, UpAndDownAreComplementary) {
    for (auto id : all_problems) {
        const auto m = builtin_problem(id);
        const auto up = enumerate_ground_states(fix_spin(m, 2, Spin::Up).model);
        const auto down = enumerate_ground_states(fix_spin(m, 2, Spin::Down).model);
        std::vector<Basis> flipped;
        for (auto x : down.states) {
            flipped.push_back(complement(x, m.n() - 1));
        }
        std::sort(flipped.begin(), flipped.end());
        EXPECT_EQ(up.states, flipped);
    }
}

TEST(FixSpin, OffsetFromLinearTerm) {
    const IsingModel m(2, {{0, 1, 1.0}}, {{0, 0.5}, {1, 2.0}});
    const auto f = fix_spin(m, 0, Spin::Down);
    // H = -(-1)z1 - 0.5(-1) - 2 z1 = -z1 + 0.5
    EXPECT_DOUBLE_EQ(f.offset, 0.5);
    for (Basis x = 0; x < 2; ++x) {
        EXPECT_DOUBLE_EQ(m.energy((x << 1) | 1), f.model.energy(x) + f.offset);
    }
    EXPECT_THROW(fix_spin(m, 2, Spin::Up), Error);
}

TEST(IsingJson, RoundTrip) {
    const auto m = reduced_problem(ProblemId::C);
    EXPECT_EQ(ising_from_json(to_json(m)), m);
    EXPECT_THROW(ising_from_json(nlohmann::json::parse(R"({"n":2,"quadratic":[[1,0,1]]})")),
                 Error);
    EXPECT_THROW(ising_from_json(nlohmann::json::parse(R"({"quadratic":[]})")), Error);
}

TEST(Bitstrings, RoundTrip) {
    EXPECT_EQ(to_bitstring(0b110, 3), "011");
    EXPECT_EQ(parse_bitstring("011", 3), 0b110U);
    EXPECT_EQ(parse_bitstring("udd", 3), 0b110U);
}
