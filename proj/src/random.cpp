#include "qpkc/random.hpp"

#include <stdexcept>

namespace qpkc {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSplitSalt = 0x632be59bd9b4e019ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : key_(mix64(seed ^ kGamma)) {}

std::uint64_t RandomSource::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double RandomSource::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t RandomSource::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("RandomSource::below: bound must be positive");
    }
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = -bound % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= limit) {
            return r % bound;
        }
    }
}

RandomSource RandomSource::split(std::uint64_t index) const {
    return RandomSource(FromKey{}, mix64(key_ ^ mix64(index + kSplitSalt)));
}

}  // namespace qpkc
