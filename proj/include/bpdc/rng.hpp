#pragma once

#include <cstdint>
#include <random>

namespace bpdc {

// Deterministic random source. Sampling is built directly on the raw
// mt19937_64 stream, so a seed pins every generated value exactly instead
// of depending on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Standard normal via Box-Muller.
    double gaussian();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives an independent stream seed from (seed, tag); splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

} // namespace bpdc
