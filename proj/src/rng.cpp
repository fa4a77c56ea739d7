#include "netresample/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace netresample {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
    return mix64(master_seed + kGolden * (mix64(tag ^ 0xD1B54A32D192ED03ULL) | 1ULL));
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed), stream_(stream_index) {
    std::uint64_t z = mix64(master_seed ^ mix64(stream_index + 0x632BE59BD9B4E019ULL));
    for (auto& word : state_) {
        z += kGolden;
        word = mix64(z);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        state_[0] = kGolden;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("uniform_index: bound must be positive");
    // Lemire's multiply-shift with rejection; exact for every bound.
    unsigned __int128 product = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double RngStream::normal() {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::geometric_skip(double log_q) {
    const double draw = std::floor(std::log1p(-uniform()) / log_q);
    if (!(draw < 1.8e19))
        return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(draw);
}

} // namespace netresample
