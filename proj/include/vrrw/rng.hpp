#pragma once

#include <cstdint>

namespace vrrw {

// SplitMix64 (Steele/Lea/Vigna, as in Java's SplittableRandom): a 64-bit
// counter advanced by the golden-gamma constant, passed through an
// avalanching finalizer. Chosen because the full algorithm fits in a
// comment and reproduces bit-for-bit in any language:
//
//   state += 0x9e3779b97f4a7c15
//   z = state
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) by rejection: discard draws below
    // (2^64 - bound) % bound, then reduce. bound must be nonzero.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0,1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

// Replica i draws its stream seed as output i of a SplitMix64 sequence
// seeded with base_seed, so enlarging an ensemble never perturbs the
// trajectories of existing replicas.
inline std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica_index) {
    std::uint64_t z = base_seed + (replica_index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace vrrw
