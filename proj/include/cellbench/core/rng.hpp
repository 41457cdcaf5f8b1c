#pragma once

#include <cstdint>
#include <initializer_list>

namespace cellbench {

std::uint64_t splitmix64(std::uint64_t &state);

// Mix a master seed with a path of stream identifiers (class id, split,
// sample index, ...) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// xoshiro256** generator seeded through splitmix64, with distribution
/// samplers implemented here rather than taken from <random> so that streams
/// are identical across standard library implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

    std::uint64_t next();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer on [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Standard normal via the Marsaglia polar method.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Poisson(mean): multiplication method below 10, PTRS (Hormann 1993) above.
    std::uint64_t poisson(double mean);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// log(k!) without touching the global signgam that std::lgamma writes.
double log_factorial(std::uint64_t k);

} // namespace cellbench
