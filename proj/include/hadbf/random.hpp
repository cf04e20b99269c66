// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "hadbf/core.hpp"

namespace hadbf
{

using Rng = std::mt19937_64;

// Stream tags used when deriving independent generators from one master seed.
enum class Stream : std::uint64_t
{
    kSnapshots = 0x51,
    kMismatch = 0x52,
    kOptimizer = 0x53,
    kTrial = 0x54,
};

std::uint64_t splitmix64(std::uint64_t &state);

// Deterministic seed for the substream addressed by `path` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

// Circular complex Gaussian with E|z|^2 = power.
Complex complex_gaussian(Rng &rng, double power);

double uniform(Rng &rng, double lo, double hi);
double standard_normal(Rng &rng);

} // namespace hadbf
