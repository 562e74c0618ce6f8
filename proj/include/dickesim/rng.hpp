#ifndef DICKESIM_RNG_HPP
#define DICKESIM_RNG_HPP

#include <cstdint>

namespace dickesim {

// Counter-based splitmix64 stream. Streams derived from (seed, stream_index)
// are independent of execution order, so parallel and serial Monte Carlo
// runs draw identical numbers per trajectory.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream_index)
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open_left() { return 1.0 - uniform(); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

}  // namespace dickesim

#endif
