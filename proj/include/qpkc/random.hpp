#pragma once

#include <cstdint>

namespace qpkc {

// Counter-based random stream. The n-th output of a stream is a pure
// function of (key, n), so a RandomSource can be replayed from its seed
// and split into independent child streams without shared state.
//
// Split rule: child(i).key = mix(key ^ mix(i + kSplitSalt)).
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer on [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    bool coin() { return (next_u64() >> 63) != 0; }

    // Independent stream determined by (this stream's key, index). Does not
    // advance this stream.
    RandomSource split(std::uint64_t index) const;

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    struct FromKey {};
    RandomSource(FromKey, std::uint64_t key) : key_(key) {}

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace qpkc
