#include "cmm/rng.hpp"

#include "cmm/error.hpp"

namespace cmm {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : eng_(seeded(seed, stream)) {}

// Lemire's multiply-shift with rejection: unbiased and portable.
std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "uniform_index(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(eng_()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace cmm
