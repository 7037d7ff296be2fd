#pragma once

#include <cstdint>

namespace spinchan {

// Splittable counter-keyed generator: the (seed, stream) pair is hashed
// through the splitmix64 finalizer to seed an independent splitmix64
// sequence per stream.  Streams can be created in any order and on any
// thread and always produce the same values, which is what makes seeded
// sweeps and Monte Carlo realizations order-insensitive.
class SplitRng {
  public:
    SplitRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                     mix(stream + 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Number of successes in n Bernoulli(p) trials; n is small here
    // (excitations per block), so direct summation is fine.
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (next_double() < p) ++k;
        return k;
    }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() { return next_u64(); }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace spinchan
