#include "cellbench/core/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cellbench/core/errors.hpp"

namespace cellbench {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::size_t kFactTableSize = 256;

std::array<double, kFactTableSize> make_log_fact_table() {
    std::array<double, kFactTableSize> t{};
    t[0] = 0.0;
    for (std::size_t k = 1; k < kFactTableSize; ++k)
        t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = master;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t id : path) {
        state = h ^ (id * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL);
        h = splitmix64(state);
    }
    return h;
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto &s : s_)
        s = splitmix64(state);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0)
        throw ConfigError("Rng::below: empty range");
    // Lemire's nearly-divisionless rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw ConfigError("Rng::poisson: mean must be finite and non-negative");
    if (mean == 0.0)
        return 0;
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = uniform();
        while (p > limit) {
            ++k;
            p *= uniform();
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
        const double rhs = -mean + k * loglam - log_factorial(static_cast<std::uint64_t>(k));
        if (lhs <= rhs)
            return static_cast<std::uint64_t>(k);
    }
}

double log_factorial(std::uint64_t k) {
    static const auto table = make_log_fact_table();
    if (k < kFactTableSize)
        return table[k];
    // Stirling series; error far below double precision for k >= 256.
    const double n = static_cast<double>(k);
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

} // namespace cellbench
