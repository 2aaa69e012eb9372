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
 * Shared vocabulary: the error type, basis-state helpers and the seed
 * derivation used by every randomized routine.
 */
#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairsamp {

using complex_t = std::complex<double>;

/// Computational basis state. Qubit i lives in bit i; bit value 0 is spin up.
using Basis = std::uint64_t;

inline constexpr double pi = std::numbers::pi;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Throw `Error` with `message` unless `condition` holds.
inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw Error(message);
    }
}

inline constexpr Basis low_mask(std::size_t n) {
    return n >= 64 ? ~Basis{0} : (Basis{1} << n) - 1;
}

inline constexpr bool bit_of(Basis x, std::size_t q) { return (x >> q) & 1U; }

inline constexpr Basis complement(Basis x, std::size_t n) {
    return ~x & low_mask(n);
}

/// Qubit-0-first rendering, '0' for spin up and '1' for spin down.
inline std::string to_bitstring(Basis x, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t q = 0; q < n; ++q) {
        if (bit_of(x, q)) {
            s[q] = '1';
        }
    }
    return s;
}

/// Inverse of to_bitstring. Also accepts 'u'/'d' for up/down.
inline Basis parse_bitstring(std::string_view s, std::size_t n) {
    require(s.size() == n, "bitstring '" + std::string(s) + "' has length " +
                               std::to_string(s.size()) + ", expected " +
                               std::to_string(n));
    Basis x = 0;
    for (std::size_t q = 0; q < n; ++q) {
        switch (s[q]) {
        case '0':
        case 'u':
            break;
        case '1':
        case 'd':
            x |= Basis{1} << q;
            break;
        default:
            throw Error("invalid character in bitstring '" + std::string(s) +
                        "'");
        }
    }
    return x;
}

/// splitmix64 finalizer; used to derive independent per-call seeds.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t counter) {
    return mix64(mix64(seed) ^ (counter * 0xd6e8feb86659fd93ULL + 1));
}

/// All randomized routines use mt19937_64.
using Rng = std::mt19937_64;

/// Uniform double in [0,1) from the top 53 bits of one engine draw. Unlike
/// std::uniform_real_distribution this is bit-identical across standard
/// libraries.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace fairsamp
