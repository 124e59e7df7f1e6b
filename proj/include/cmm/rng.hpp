#pragma once

#include <cstdint>
#include <random>

namespace cmm {

// 64-bit Mersenne Twister with explicit integer/real mappings so a fixed seed
// gives the same stream on every platform. std::uniform_int_distribution is
// implementation-defined, so it is not used.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64/seed_seq(seed,stream)";

    explicit Rng(std::uint64_t seed = 0) : Rng(seed, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() { return eng_(); }

    // Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

}  // namespace cmm
