#ifndef SAM_RNG_HPP
#define SAM_RNG_HPP

#include <cstdint>

namespace sam {

/// Splittable 64-bit random generator (splitmix64 core).
///
/// A generator is a small value type: copying it forks the stream, and two
/// generators built from the same seed produce identical output. Independent
/// per-sample streams come from `for_sample(seed, index)`, which mixes the
/// pair through the splitmix64 finalizer so that Monte Carlo runs are
/// reproducible from (seed, sample index) alone, regardless of how samples
/// are distributed over threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    /// Derive the generator for one sample of a (seed, index) ensemble.
    static Rng for_sample(std::uint64_t seed, std::uint64_t index) noexcept {
        const std::uint64_t a = mix(seed + 0x9e3779b97f4a7c15ULL);
        const std::uint64_t b = mix(index + 0x632be59bd9b4e019ULL);
        return Rng(mix(a ^ (b + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in the open interval (0, 1); never returns an endpoint,
    /// so inverse-CDF transforms stay finite.
    double next_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace sam

#endif  // SAM_RNG_HPP
