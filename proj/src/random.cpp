// SPDX-License-Identifier: Apache-2.0
#include "hadbf/random.hpp"

#include <cmath>

namespace hadbf
{

std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    for (std::uint64_t p : path)
    {
        state ^= out + p * 0xd1b54a32d192ed03ULL;
        out = splitmix64(state);
    }
    return out;
}

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(derive_seed(master, path));
}

Complex complex_gaussian(Rng &rng, double power)
{
    std::normal_distribution<double> n(0.0, 1.0);
    const double scale = std::sqrt(power / 2.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re * scale, im * scale};
}

double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double standard_normal(Rng &rng)
{
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

} // namespace hadbf
