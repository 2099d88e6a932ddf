#pragma once

#include <cstdint>

namespace qread {

/// SplitMix64 stream; also used as a stateless mixer for counter-derived
/// seeds so that randomized structures are reproducible from one integer.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4B5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64()) * 0x1p-64; }

  private:
    std::uint64_t state_;
};

inline std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ (0x9E3779B97F4A7C15ull + (b << 1)));
    s.next_u64();
    return s.next_u64() ^ b;
}

/// One uniform double determined by a tuple of integers.
inline double hash_uniform(std::uint64_t seed, std::uint64_t tag, std::uint64_t payload) {
    SplitMix64 s(mix_u64(mix_u64(seed, tag), payload));
    return s.uniform();
}

}  // namespace qread
