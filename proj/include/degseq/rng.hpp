#pragma once

#include <cstdint>
#include <random>

namespace degseq {

// One reproducible stream per trial. The engine state is a pure function of
// (seed, stream), so trials can be scheduled on any thread in any order and
// still replay bit-for-bit. All draws go through the helpers below rather
// than std distributions, whose output is implementation-defined.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        const std::uint64_t w0 = mix(x), w1 = mix(x), w2 = mix(x), w3 = mix(x);
        std::seed_seq seq{w0, w1, w2, w3};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased (rejection above the last full block).
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * (~std::uint64_t{0} / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

  private:
    static std::uint64_t mix(std::uint64_t& state) {
        // splitmix64 step
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace degseq
