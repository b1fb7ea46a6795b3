#ifndef INGRAPE_RNG_HPP
#define INGRAPE_RNG_HPP

#include <cstdint>

namespace ingrape {

// Counter-based random numbers. Every draw is a pure function of
// (seed, counter), so streams can be replayed or split without shared
// state. The mixing function is the SplitMix64 finalizer; the draw at
// counter i is
//
//   out(seed, i) = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
//
// which equals the i-th output of a SplitMix64 generator seeded with
// `seed`. Any implementation reproducing this formula reproduces every
// random quantity in the project.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rand_u64(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

// Per-launch seed in a multi-start experiment: run i of master seed s
// draws from the stream keyed by rand_u64(s, i).
inline std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    return rand_u64(master_seed, run_index);
}

// Stateful convenience wrapper around the counter stream.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return rand_u64(seed_, counter_++); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace ingrape

#endif
