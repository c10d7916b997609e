#ifndef SUMCODE_RNG_HPP
#define SUMCODE_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace sumcode {

/// SplitMix64 step; the output sequence is fixed by the standard constants,
/// so streams are byte-exact across platforms and compilers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d9de3b6aecf373ULL;
    return z ^ (z >> 31);
}

/// Deterministic splittable generator. A stream is identified by a root seed
/// and a derivation path, e.g. Prng::derive(seed, {attempt}) for generator
/// redraws or Prng::derive(seed, {trial}) for Monte Carlo trials. Derivation
/// mixes each path element through SplitMix64, so sibling streams are
/// decorrelated and every stream is reproducible from (seed, path, draw index).
class Prng {
  public:
    explicit Prng(std::uint64_t key) : state_(key) {
        // Warm up so that nearby keys diverge immediately.
        splitmix64(state_);
    }

    static Prng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = seed;
        for (std::uint64_t p : path) {
            std::uint64_t mixed = s;
            splitmix64(mixed);
            s = mixed ^ (p + 0x9e3779b97f4a7c15ULL);
            splitmix64(s);
        }
        return Prng(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, bound) by rejection; unbiased for any bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~0ULL / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace sumcode

#endif
